#include "sumeval/config.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "sumeval/corpus.hpp"
#include "sumeval/error.hpp"
#include "sumeval/hash.hpp"
#include "sumeval/registry.hpp"
#include "toml.hpp"

namespace sumeval {
namespace {

const std::map<std::string, std::set<std::string>>& allowed_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"", {"seed", "halved", "miner", "scoring", "analysis", "pipeline"}},
      {"miner", {"coverage_threshold", "satd_keywords", "min_summary_tokens", "max_summary_tokens"}},
      {"scoring",
       {"metrics", "brevity_penalty", "rouge_w_weight", "meteor_alpha", "meteor_beta", "meteor_gamma",
        "chrf_max_n", "chrf_beta", "synonyms", "normalize", "strict", "threads"}},
      {"analysis", {"redun_threshold", "linkage", "bh_family"}},
      {"pipeline", {"matrix", "evaluations", "out_dir"}},
  };
  return keys;
}

void check_keys(const toml::table& table, const std::string& section) {
  const auto& allowed = allowed_keys().at(section);
  for (const auto& [key, node] : table) {
    const std::string name(key.str());
    if (allowed.count(name) == 0) {
      throw DataError("config: unknown key '" + (section.empty() ? name : section + "." + name) + "'");
    }
    if (section.empty() && allowed_keys().count(name) != 0 && !node.is_table()) {
      throw DataError("config: '" + name + "' must be a table");
    }
  }
}

template <class T>
void read(const toml::table* table, const char* section, const char* key, T& out) {
  if (table == nullptr) return;
  const toml::node* node = table->get(key);
  if (node == nullptr) return;
  std::optional<T> value;
  if constexpr (std::is_same_v<T, double>) {
    if (node->is_integer() || node->is_floating_point()) value = node->value<double>();
  } else if constexpr (std::is_same_v<T, bool>) {
    if (node->is_boolean()) value = node->value<bool>();
  } else if constexpr (std::is_integral_v<T>) {
    if (node->is_integer()) value = node->value<T>();
  } else {
    if (node->is_string()) value = node->value<T>();
  }
  if (!value) throw DataError(fmt::format("config: {}{}{} has the wrong type", section, *section ? "." : "", key));
  out = *value;
}

void read_strings(const toml::table* table, const char* section, const char* key,
                  std::vector<std::string>& out) {
  if (table == nullptr) return;
  const toml::node* node = table->get(key);
  if (node == nullptr) return;
  const toml::array* array = node->as_array();
  if (array == nullptr) throw DataError(fmt::format("config: {}.{} must be an array of strings", section, key));
  out.clear();
  for (const auto& item : *array) {
    const auto s = item.value<std::string>();
    if (!s) throw DataError(fmt::format("config: {}.{} must be an array of strings", section, key));
    out.push_back(*s);
  }
}

std::string resolve(const std::string& path, const std::filesystem::path& base_dir) {
  if (path.empty() || base_dir.empty() || std::filesystem::path(path).is_absolute()) return path;
  return (base_dir / path).lexically_normal().string();
}

std::string toml_string(const std::string& s) { return nlohmann::json(s).dump(); }

std::string toml_float(double v) {
  std::string s = format_real(v);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

std::string toml_strings(const std::vector<std::string>& items) {
  std::string out = "[";
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? ", " : "") + toml_string(items[i]);
  return out + "]";
}

}  // namespace

std::vector<std::string> ScoringConfig::enabled_groups() const {
  std::vector<std::string> out;
  for (const auto& g : metric_groups()) {
    if (metrics.empty() || std::find(metrics.begin(), metrics.end(), g.name) != metrics.end()) {
      out.push_back(g.name);
    }
  }
  return out;
}

void Config::validate() const {
  miner.validate();
  for (const auto& m : scoring.metrics) metric_group(m);
  if (!(scoring.rouge_w_weight > 1.0)) throw DataError("config: scoring.rouge_w_weight must exceed 1");
  if (!(scoring.meteor.alpha > 0.0 && scoring.meteor.alpha < 1.0)) {
    throw DataError("config: scoring.meteor_alpha must lie in (0, 1)");
  }
  if (!(scoring.meteor.beta > 0.0)) throw DataError("config: scoring.meteor_beta must be positive");
  if (!(scoring.meteor.gamma >= 0.0 && scoring.meteor.gamma <= 1.0)) {
    throw DataError("config: scoring.meteor_gamma must lie in [0, 1]");
  }
  if (scoring.chrf_max_n < 1) throw DataError("config: scoring.chrf_max_n must be at least 1");
  if (!(scoring.chrf_beta > 0.0)) throw DataError("config: scoring.chrf_beta must be positive");
  if (scoring.threads < 0) throw DataError("config: scoring.threads must be non-negative");
  if (!(analysis.redun_threshold > 0.0 && analysis.redun_threshold < 1.0)) {
    throw DataError("config: analysis.redun_threshold must lie in (0, 1)");
  }
}

Config parse_config(std::string_view toml_text, const std::filesystem::path& base_dir) {
  toml::table root;
  try {
    root = toml::parse(toml_text);
  } catch (const toml::parse_error& e) {
    const auto& where = e.source().begin;
    throw DataError(fmt::format("config line {}: {}", where.line, e.description()));
  }
  check_keys(root, "");
  const toml::table* miner = root["miner"].as_table();
  const toml::table* scoring = root["scoring"].as_table();
  const toml::table* analysis = root["analysis"].as_table();
  const toml::table* pipeline = root["pipeline"].as_table();
  if (miner) check_keys(*miner, "miner");
  if (scoring) check_keys(*scoring, "scoring");
  if (analysis) check_keys(*analysis, "analysis");
  if (pipeline) check_keys(*pipeline, "pipeline");

  Config cfg;
  std::int64_t seed = 0;
  read(&root, "", "seed", seed);
  if (seed < 0) throw DataError("config: seed must be non-negative");
  cfg.seed = static_cast<std::uint64_t>(seed);
  cfg.miner.rng_seed = cfg.seed;
  read(&root, "", "halved", cfg.halved);

  read(miner, "miner", "coverage_threshold", cfg.miner.coverage_threshold);
  read_strings(miner, "miner", "satd_keywords", cfg.miner.satd_keywords);
  read(miner, "miner", "min_summary_tokens", cfg.miner.min_summary_tokens);
  read(miner, "miner", "max_summary_tokens", cfg.miner.max_summary_tokens);

  read_strings(scoring, "scoring", "metrics", cfg.scoring.metrics);
  read(scoring, "scoring", "brevity_penalty", cfg.scoring.brevity_penalty);
  read(scoring, "scoring", "rouge_w_weight", cfg.scoring.rouge_w_weight);
  read(scoring, "scoring", "meteor_alpha", cfg.scoring.meteor.alpha);
  read(scoring, "scoring", "meteor_beta", cfg.scoring.meteor.beta);
  read(scoring, "scoring", "meteor_gamma", cfg.scoring.meteor.gamma);
  read(scoring, "scoring", "chrf_max_n", cfg.scoring.chrf_max_n);
  read(scoring, "scoring", "chrf_beta", cfg.scoring.chrf_beta);
  read(scoring, "scoring", "synonyms", cfg.scoring.synonyms);
  read(scoring, "scoring", "normalize", cfg.scoring.normalize);
  read(scoring, "scoring", "strict", cfg.scoring.strict);
  read(scoring, "scoring", "threads", cfg.scoring.threads);
  cfg.scoring.synonyms = resolve(cfg.scoring.synonyms, base_dir);

  read(analysis, "analysis", "redun_threshold", cfg.analysis.redun_threshold);
  std::string linkage = to_string(cfg.analysis.linkage);
  read(analysis, "analysis", "linkage", linkage);
  cfg.analysis.linkage = parse_linkage(linkage);
  std::string family = to_string(cfg.analysis.bh_family);
  read(analysis, "analysis", "bh_family", family);
  cfg.analysis.bh_family = parse_bh_family(family);

  read(pipeline, "pipeline", "matrix", cfg.pipeline.matrix);
  read(pipeline, "pipeline", "evaluations", cfg.pipeline.evaluations);
  read(pipeline, "pipeline", "out_dir", cfg.pipeline.out_dir);
  cfg.pipeline.matrix = resolve(cfg.pipeline.matrix, base_dir);
  cfg.pipeline.evaluations = resolve(cfg.pipeline.evaluations, base_dir);
  cfg.pipeline.out_dir = resolve(cfg.pipeline.out_dir, base_dir);

  cfg.validate();
  return cfg;
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path.parent_path());
}

// Input paths, the output directory and the thread count do not change what
// is computed, so they stay out of the hashed text.
std::string canonical_config(const Config& cfg) {
  std::string out;
  out += fmt::format("seed = {}\nhalved = {}\n", cfg.seed, cfg.halved);
  out += "\n[miner]\n";
  out += fmt::format("coverage_threshold = {}\n", toml_float(cfg.miner.coverage_threshold));
  out += fmt::format("satd_keywords = {}\n", toml_strings(cfg.miner.satd_keywords));
  out += fmt::format("min_summary_tokens = {}\n", cfg.miner.min_summary_tokens);
  out += fmt::format("max_summary_tokens = {}\n", cfg.miner.max_summary_tokens);
  out += "\n[scoring]\n";
  out += fmt::format("metrics = {}\n", toml_strings(cfg.scoring.enabled_groups()));
  out += fmt::format("brevity_penalty = {}\n", cfg.scoring.brevity_penalty);
  out += fmt::format("rouge_w_weight = {}\n", toml_float(cfg.scoring.rouge_w_weight));
  out += fmt::format("meteor_alpha = {}\n", toml_float(cfg.scoring.meteor.alpha));
  out += fmt::format("meteor_beta = {}\n", toml_float(cfg.scoring.meteor.beta));
  out += fmt::format("meteor_gamma = {}\n", toml_float(cfg.scoring.meteor.gamma));
  out += fmt::format("chrf_max_n = {}\n", cfg.scoring.chrf_max_n);
  out += fmt::format("chrf_beta = {}\n", toml_float(cfg.scoring.chrf_beta));
  out += fmt::format("synonyms = {}\n",
                     toml_string(cfg.scoring.synonyms.empty() ? "" : sha256_file(cfg.scoring.synonyms)));
  out += fmt::format("normalize = {}\n", cfg.scoring.normalize);
  out += fmt::format("strict = {}\n", cfg.scoring.strict);
  out += "\n[analysis]\n";
  out += fmt::format("redun_threshold = {}\n", toml_float(cfg.analysis.redun_threshold));
  out += fmt::format("linkage = {}\n", toml_string(to_string(cfg.analysis.linkage)));
  out += fmt::format("bh_family = {}\n", toml_string(to_string(cfg.analysis.bh_family)));
  return out;
}

std::string config_hash(const Config& cfg) { return sha256_hex(canonical_config(cfg)); }

std::string to_string(BhFamily family) {
  return family == BhFamily::per_model ? "per-model" : "all-models";
}

BhFamily parse_bh_family(const std::string& name) {
  if (name == "per-model") return BhFamily::per_model;
  if (name == "all-models") return BhFamily::all_models;
  throw DataError("unknown BH family '" + name + "' (expected per-model or all-models)");
}

std::string to_string(Linkage linkage) {
  switch (linkage) {
    case Linkage::single: return "single";
    case Linkage::complete: return "complete";
    case Linkage::average: break;
  }
  return "average";
}

}  // namespace sumeval
