#pragma once

// Run configuration: one TOML file whose every key can be overridden from the
// command line, plus the canonical form hashed into output manifests.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "sumeval/miner.hpp"
#include "sumeval/overlap.hpp"
#include "sumeval/stats/varclus.hpp"

namespace sumeval {

inline constexpr std::string_view kToolVersion = "0.1.0";

struct ScoringConfig {
  std::vector<std::string> metrics;  // metric group names; empty = all groups
  bool brevity_penalty = true;
  double rouge_w_weight = 1.2;
  MeteorParams meteor;
  int chrf_max_n = 6;
  double chrf_beta = 2.0;
  std::string synonyms;  // optional JSONL synonym table
  bool normalize = false;
  bool strict = false;
  int threads = 0;  // 0 = hardware concurrency

  /// Enabled groups in canonical order.
  std::vector<std::string> enabled_groups() const;
};

enum class BhFamily { per_model, all_models };

struct AnalysisConfig {
  double redun_threshold = 0.8;
  Linkage linkage = Linkage::average;
  BhFamily bh_family = BhFamily::per_model;
};

struct PipelineConfig {
  std::string matrix;       // metric CSV
  std::string evaluations;  // evaluation JSONL
  std::string out_dir;
};

struct Config {
  std::uint64_t seed = 0;
  bool halved = false;
  MinerConfig miner;
  ScoringConfig scoring;
  AnalysisConfig analysis;
  PipelineConfig pipeline;

  /// Throws DataError on out-of-range values or unknown metric groups.
  void validate() const;
};

/// Parses TOML text. Unknown keys are rejected. Relative paths in
/// [pipeline] and scoring.synonyms resolve against `base_dir`.
Config parse_config(std::string_view toml_text, const std::filesystem::path& base_dir = {});
Config load_config(const std::filesystem::path& path);

/// Deterministic TOML rendering of every setting; the config hash is taken
/// over this text.
std::string canonical_config(const Config& cfg);
std::string config_hash(const Config& cfg);

std::string to_string(BhFamily family);
BhFamily parse_bh_family(const std::string& name);
std::string to_string(Linkage linkage);

}  // namespace sumeval
