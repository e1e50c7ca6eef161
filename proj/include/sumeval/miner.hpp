#pragma once

// Builds contrastive (method, positive summary, negative summary) triplets
// from Java sources: positives from the first Javadoc sentence, random
// negatives from other methods' summaries, hard negatives from inner comments
// that document only a small share of the method's statements.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "sumeval/corpus.hpp"

namespace sumeval {

struct MinerConfig {
  double coverage_threshold = 0.25;
  std::vector<std::string> satd_keywords{"to-do", "fix-me", "todo", "fixme", "xxx", "hackme", "hack-me"};
  int min_summary_tokens = 3;
  int max_summary_tokens = 256;
  std::uint64_t rng_seed = 0;

  /// Throws DataError when the threshold is outside (0, 1] or a keyword is
  /// not lowercase.
  void validate() const;
};

struct ExtractionResult {
  std::vector<CodeUnit> units;
  std::vector<std::string> diagnostics;
};

/// One CodeUnit per method or constructor with a body. `file_id` prefixes the
/// unit ids ("<file_id>#<name>:<line>"). A file with unbalanced braces or an
/// unterminated comment/literal yields no units and one diagnostic.
ExtractionResult extract_methods(std::string_view java_source, std::string_view file_id = "");

/// Statements in a method body: semicolons outside parentheses plus block
/// headers (a '{' following ')', '->', else, try, finally or do).
int count_statements(std::string_view method_source);

/// Inner comments of a method with the statements each documents. A leading
/// comment (consecutive comment-only lines merged) covers every following
/// statement up to a blank line or a '}'; a trailing comment covers the
/// statements ending on its own line.
std::vector<InnerComment> associate_comments(std::string_view method_source);

/// Drops comments whose case-folded text contains any SATD keyword.
std::vector<InnerComment> filter_satd(const std::vector<InnerComment>& comments,
                                      const MinerConfig& cfg);

/// True when the unit's summary exists and its token count is within the
/// configured bounds.
bool has_valid_summary(const CodeUnit& unit, const MinerConfig& cfg);

/// One hard triplet per non-SATD inner comment with coverage_ratio strictly
/// below the threshold, for every unit with a valid summary.
std::vector<Triplet> mine_hard_negatives(const std::vector<CodeUnit>& units, const MinerConfig& cfg);

/// One triplet per unit with a valid summary; the negative is another unit's
/// summary drawn with a seeded generator and redrawn while textually equal to
/// the positive. Throws DataError with fewer than two distinct summaries.
std::vector<Triplet> mine_random_negatives(const std::vector<CodeUnit>& units,
                                           const MinerConfig& cfg);

enum class MiningMode { both, hard_only, random_only };

struct MiningResult {
  std::vector<CodeUnit> units;
  std::vector<Triplet> triplets;  // random negatives first, then hard
  std::vector<std::string> diagnostics;
};

/// Extracts every *.java file under `root` (sorted by relative path) and mines
/// triplets from the pooled units.
MiningResult mine_directory(const std::filesystem::path& root, const MinerConfig& cfg,
                            MiningMode mode = MiningMode::both);

}  // namespace sumeval
