#pragma once

// Word- and character-overlap metrics between a generated summary and a
// single reference (BLEU, ROUGE, METEOR, chrF, Jaccard) or between a summary
// and its code (c_coeff).

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "sumeval/metric_score.hpp"
#include "sumeval/text.hpp"

namespace sumeval {

/// Word -> synonym set. Matching is symmetric: a and b match when either
/// lists the other.
class SynonymTable {
 public:
  SynonymTable() = default;

  void add(const std::string& word, const std::vector<std::string>& synonyms);
  bool matches(const std::string& a, const std::string& b) const;
  bool empty() const { return table_.empty(); }

  /// JSONL: {"word": "...", "synonyms": ["..."]} per line.
  static SynonymTable load(const std::filesystem::path& path);

 private:
  std::map<std::string, std::set<std::string>, std::less<>> table_;
};

struct MeteorParams {
  double alpha = 0.9;  // Fmean = PR / (alpha P + (1 - alpha) R)
  double beta = 3.0;   // fragmentation exponent
  double gamma = 0.5;  // maximum penalty
};

struct OverlapConfig {
  bool brevity_penalty = true;
  double rouge_w_weight = 1.2;
  MeteorParams meteor;
  int chrf_max_n = 6;
  double chrf_beta = 2.0;
  const SynonymTable* synonyms = nullptr;
};

/// Sentence BLEU for one n-gram order. Clipped precision times
/// BP = min(1, exp(1 - r/c)); a zero precision for n > 1 becomes
/// 1 / (total + 1).
double bleu_n(const TokenStream& candidate, const TokenStream& reference, int n,
              bool brevity_penalty = true);

/// Geometric mean of the (smoothed) BLEU-1..4 precisions, brevity penalty
/// applied once.
double bleu_a(const TokenStream& candidate, const TokenStream& reference,
              bool brevity_penalty = true);

PrecisionRecallF1 rouge_n(const TokenStream& candidate, const TokenStream& reference, int n);
PrecisionRecallF1 rouge_l(const TokenStream& candidate, const TokenStream& reference);
PrecisionRecallF1 rouge_w(const TokenStream& candidate, const TokenStream& reference,
                          double weight = 1.2);

/// Weighted LCS score with f(k) = k^weight, consecutive runs rewarded.
double weighted_lcs(const std::vector<std::string>& a, const std::vector<std::string>& b,
                    double weight);
std::size_t lcs_length(const std::vector<std::string>& a, const std::vector<std::string>& b);

/// Staged unigram alignment (exact, Porter stem, optional synonyms), each
/// stage matching candidate tokens left to right to the first free
/// reference token.
double meteor(const TokenStream& candidate, const TokenStream& reference,
              const MeteorParams& params = {}, const SynonymTable* synonyms = nullptr);

/// Character n-gram F-score on case-folded, whitespace-collapsed text.
double chrf(std::string_view candidate_text, std::string_view reference_text, int max_n = 6,
            double beta = 2.0);

double jaccard(const TokenStream& candidate, const TokenStream& reference);

std::size_t levenshtein(std::string_view a, std::string_view b);

/// Fraction of summary tokens within edit distance 1 of some code token.
double c_coeff(const TokenStream& summary, const TokenStream& code);

/// Every overlap column of the registry for one pair, in registry order.
std::vector<MetricScore> score_overlap(std::string_view candidate, std::string_view reference,
                                       std::string_view code, const OverlapConfig& cfg = {});

}  // namespace sumeval
