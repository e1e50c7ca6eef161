#include "sumeval/overlap.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"
#include "sumeval/error.hpp"

namespace sumeval {
namespace {

using NgramCounts = std::unordered_map<std::string, int>;

NgramCounts count_ngrams(const std::vector<std::string>& tokens, int n) {
  NgramCounts counts;
  const auto order = static_cast<std::size_t>(n);
  for (std::size_t i = 0; i + order <= tokens.size(); ++i) {
    std::string key = tokens[i];
    for (std::size_t k = 1; k < order; ++k) {
      key += '\x1f';
      key += tokens[i + k];
    }
    ++counts[key];
  }
  return counts;
}

int ngram_total(std::size_t length, int n) {
  return length >= static_cast<std::size_t>(n) ? static_cast<int>(length) - n + 1 : 0;
}

int clipped_matches(const NgramCounts& candidate, const NgramCounts& reference) {
  int matches = 0;
  for (const auto& [gram, count] : candidate) {
    if (const auto it = reference.find(gram); it != reference.end()) {
      matches += std::min(count, it->second);
    }
  }
  return matches;
}

double harmonic(double p, double r) { return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0; }

double bleu_precision(const TokenStream& candidate, const TokenStream& reference, int n) {
  const int total = ngram_total(candidate.size(), n);
  const int matches = clipped_matches(count_ngrams(candidate.tokens, n), count_ngrams(reference.tokens, n));
  if (matches == 0) return n > 1 ? 1.0 / (total + 1.0) : 0.0;
  return static_cast<double>(matches) / total;
}

double brevity(const TokenStream& candidate, const TokenStream& reference, bool enabled) {
  if (!enabled) return 1.0;
  const auto c = static_cast<double>(candidate.size());
  const auto r = static_cast<double>(reference.size());
  return std::min(1.0, std::exp(1.0 - r / c));
}

void check_order(int n) {
  if (n < 1 || n > 4) throw std::invalid_argument("n-gram order must be in 1..4");
}

// Splits UTF-8 text into code-point units; malformed bytes become their own unit.
std::vector<std::string> utf8_units(std::string_view text) {
  std::vector<std::string> units;
  std::size_t i = 0;
  while (i < text.size()) {
    const auto lead = static_cast<unsigned char>(text[i]);
    std::size_t len = 1;
    if (lead >= 0xF0) {
      len = 4;
    } else if (lead >= 0xE0) {
      len = 3;
    } else if (lead >= 0xC0) {
      len = 2;
    }
    len = std::min(len, text.size() - i);
    units.emplace_back(text.substr(i, len));
    i += len;
  }
  return units;
}

}  // namespace

void SynonymTable::add(const std::string& word, const std::vector<std::string>& synonyms) {
  auto& set = table_[word];
  for (const auto& s : synonyms) {
    if (s != word) set.insert(s);
  }
}

bool SynonymTable::matches(const std::string& a, const std::string& b) const {
  auto listed = [this](const std::string& x, const std::string& y) {
    const auto it = table_.find(x);
    return it != table_.end() && it->second.contains(y);
  };
  return listed(a, b) || listed(b, a);
}

SynonymTable SynonymTable::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open synonym table '" + path.string() + "'");
  SynonymTable table;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto obj = nlohmann::json::parse(line);
      table.add(obj.at("word").get<std::string>(), obj.at("synonyms").get<std::vector<std::string>>());
    } catch (const nlohmann::json::exception& e) {
      throw DataError("synonym table line " + std::to_string(number) + ": " + e.what());
    }
  }
  return table;
}

double bleu_n(const TokenStream& candidate, const TokenStream& reference, int n,
              bool brevity_penalty) {
  check_order(n);
  if (candidate.empty()) return 0.0;
  return brevity(candidate, reference, brevity_penalty) * bleu_precision(candidate, reference, n);
}

double bleu_a(const TokenStream& candidate, const TokenStream& reference, bool brevity_penalty) {
  if (candidate.empty()) return 0.0;
  double log_sum = 0.0;
  for (int n = 1; n <= 4; ++n) {
    const double p = bleu_precision(candidate, reference, n);
    if (p == 0.0) return 0.0;
    log_sum += std::log(p);
  }
  return brevity(candidate, reference, brevity_penalty) * std::exp(log_sum / 4.0);
}

PrecisionRecallF1 rouge_n(const TokenStream& candidate, const TokenStream& reference, int n) {
  check_order(n);
  const int cand_total = ngram_total(candidate.size(), n);
  const int ref_total = ngram_total(reference.size(), n);
  const int matches = clipped_matches(count_ngrams(candidate.tokens, n), count_ngrams(reference.tokens, n));
  PrecisionRecallF1 out;
  out.precision = cand_total > 0 ? static_cast<double>(matches) / cand_total : 0.0;
  out.recall = ref_total > 0 ? static_cast<double>(matches) / ref_total : 0.0;
  out.f1 = harmonic(out.precision, out.recall);
  return out;
}

std::size_t lcs_length(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::vector<std::size_t> prev(b.size() + 1, 0);
  std::vector<std::size_t> cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

PrecisionRecallF1 rouge_l(const TokenStream& candidate, const TokenStream& reference) {
  if (candidate.empty() || reference.empty()) return {};
  const auto lcs = static_cast<double>(lcs_length(candidate.tokens, reference.tokens));
  PrecisionRecallF1 out;
  out.precision = lcs / static_cast<double>(candidate.size());
  out.recall = lcs / static_cast<double>(reference.size());
  out.f1 = harmonic(out.precision, out.recall);
  return out;
}

double weighted_lcs(const std::vector<std::string>& a, const std::vector<std::string>& b,
                    double weight) {
  const std::size_t cols = b.size() + 1;
  std::vector<double> score((a.size() + 1) * cols, 0.0);
  std::vector<int> run((a.size() + 1) * cols, 0);
  auto at = [cols](std::size_t i, std::size_t j) { return i * cols + j; };
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      if (a[i - 1] == b[j - 1]) {
        const int k = run[at(i - 1, j - 1)];
        score[at(i, j)] = score[at(i - 1, j - 1)] + std::pow(k + 1.0, weight) - std::pow(k, weight);
        run[at(i, j)] = k + 1;
      } else {
        score[at(i, j)] = std::max(score[at(i - 1, j)], score[at(i, j - 1)]);
      }
    }
  }
  return score[at(a.size(), b.size())];
}

PrecisionRecallF1 rouge_w(const TokenStream& candidate, const TokenStream& reference, double weight) {
  if (!(weight > 1.0)) throw std::invalid_argument("ROUGE-W weight must exceed 1");
  if (candidate.empty() || reference.empty()) return {};
  const double wlcs = weighted_lcs(candidate.tokens, reference.tokens, weight);
  // f^-1(WLCS / f(len)) with f(k) = k^w reduces to WLCS^(1/w) / len.
  const double root = std::pow(wlcs, 1.0 / weight);
  PrecisionRecallF1 out;
  out.precision = std::min(1.0, root / static_cast<double>(candidate.size()));
  out.recall = std::min(1.0, root / static_cast<double>(reference.size()));
  out.f1 = harmonic(out.precision, out.recall);
  return out;
}

double meteor(const TokenStream& candidate, const TokenStream& reference, const MeteorParams& params,
              const SynonymTable* synonyms) {
  const auto& cand = candidate.tokens;
  const auto& ref = reference.tokens;
  std::vector<bool> cand_used(cand.size(), false);
  std::vector<bool> ref_used(ref.size(), false);
  std::vector<std::pair<std::size_t, std::size_t>> alignment;

  auto stage = [&](auto&& related) {
    for (std::size_t i = 0; i < cand.size(); ++i) {
      if (cand_used[i]) continue;
      for (std::size_t j = 0; j < ref.size(); ++j) {
        if (!ref_used[j] && related(i, j)) {
          cand_used[i] = ref_used[j] = true;
          alignment.emplace_back(i, j);
          break;
        }
      }
    }
  };

  stage([&](std::size_t i, std::size_t j) { return cand[i] == ref[j]; });
  std::vector<std::string> cand_stems;
  std::vector<std::string> ref_stems;
  std::transform(cand.begin(), cand.end(), std::back_inserter(cand_stems), porter_stem);
  std::transform(ref.begin(), ref.end(), std::back_inserter(ref_stems), porter_stem);
  stage([&](std::size_t i, std::size_t j) { return cand_stems[i] == ref_stems[j]; });
  if (synonyms != nullptr && !synonyms->empty()) {
    stage([&](std::size_t i, std::size_t j) { return synonyms->matches(cand[i], ref[j]); });
  }

  if (alignment.empty()) return 0.0;
  const auto matches = static_cast<double>(alignment.size());
  const double precision = matches / static_cast<double>(cand.size());
  const double recall = matches / static_cast<double>(ref.size());
  const double fmean =
      precision * recall / (params.alpha * precision + (1.0 - params.alpha) * recall);

  std::sort(alignment.begin(), alignment.end());
  int chunks = 1;
  for (std::size_t k = 1; k < alignment.size(); ++k) {
    const bool adjacent = alignment[k].first == alignment[k - 1].first + 1 &&
                          alignment[k].second == alignment[k - 1].second + 1;
    if (!adjacent) ++chunks;
  }
  const double penalty = params.gamma * std::pow(chunks / matches, params.beta);
  return fmean * (1.0 - penalty);
}

double chrf(std::string_view candidate_text, std::string_view reference_text, int max_n,
            double beta) {
  if (max_n < 1) throw std::invalid_argument("chrF max_n must be >= 1");
  if (!(beta > 0.0)) throw std::invalid_argument("chrF beta must be positive");
  const auto cand = utf8_units(fold_and_collapse(candidate_text));
  const auto ref = utf8_units(fold_and_collapse(reference_text));
  if (cand.empty() && ref.empty()) return 1.0;
  if (cand.empty() || ref.empty()) return 0.0;

  double precision_sum = 0.0;
  double recall_sum = 0.0;
  int orders = 0;
  for (int n = 1; n <= max_n; ++n) {
    const int cand_total = ngram_total(cand.size(), n);
    const int ref_total = ngram_total(ref.size(), n);
    if (cand_total == 0 || ref_total == 0) continue;
    const int matches = clipped_matches(count_ngrams(cand, n), count_ngrams(ref, n));
    precision_sum += static_cast<double>(matches) / cand_total;
    recall_sum += static_cast<double>(matches) / ref_total;
    ++orders;
  }
  const double p = precision_sum / orders;
  const double r = recall_sum / orders;
  const double b2 = beta * beta;
  const double denom = b2 * p + r;
  return denom > 0.0 ? (1.0 + b2) * p * r / denom : 0.0;
}

double jaccard(const TokenStream& candidate, const TokenStream& reference) {
  const std::unordered_set<std::string> a(candidate.tokens.begin(), candidate.tokens.end());
  const std::unordered_set<std::string> b(reference.tokens.begin(), reference.tokens.end());
  if (a.empty() && b.empty()) return 1.0;
  std::size_t common = 0;
  for (const auto& t : a) common += b.count(t);
  return static_cast<double>(common) / static_cast<double>(a.size() + b.size() - common);
}

std::size_t levenshtein(std::string_view a, std::string_view b) {
  std::vector<std::size_t> prev(b.size() + 1);
  std::vector<std::size_t> cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t subst = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, subst});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

double c_coeff(const TokenStream& summary, const TokenStream& code) {
  if (summary.empty()) return 0.0;
  const std::unordered_set<std::string> words(code.tokens.begin(), code.tokens.end());
  std::size_t similar = 0;
  for (const auto& token : summary.tokens) {
    const bool hit = std::any_of(words.begin(), words.end(), [&token](const std::string& w) {
      const auto gap = token.size() > w.size() ? token.size() - w.size() : w.size() - token.size();
      return gap <= 1 && levenshtein(token, w) <= 1;
    });
    if (hit) ++similar;
  }
  return static_cast<double>(similar) / static_cast<double>(summary.size());
}

std::vector<MetricScore> score_overlap(std::string_view candidate, std::string_view reference,
                                       std::string_view code, const OverlapConfig& cfg) {
  const auto cand = tokenize_summary(candidate);
  const auto ref = tokenize_summary(reference);
  std::vector<MetricScore> out;
  out.reserve(27);
  for (int n = 1; n <= 4; ++n) {
    out.push_back({"BLEU-" + std::to_string(n), bleu_n(cand, ref, n, cfg.brevity_penalty)});
  }
  out.push_back({"BLEU-A", bleu_a(cand, ref, cfg.brevity_penalty)});
  auto push_prf = [&out](const std::string& stem, const PrecisionRecallF1& s) {
    out.push_back({stem + "-P", s.precision});
    out.push_back({stem + "-R", s.recall});
    out.push_back({stem + "-F1", s.f1});
  };
  for (int n = 1; n <= 4; ++n) push_prf("ROUGE-" + std::to_string(n), rouge_n(cand, ref, n));
  push_prf("ROUGE-L", rouge_l(cand, ref));
  push_prf("ROUGE-W", rouge_w(cand, ref, cfg.rouge_w_weight));
  out.push_back({"METEOR", meteor(cand, ref, cfg.meteor, cfg.synonyms)});
  out.push_back({"chrF", chrf(candidate, reference, cfg.chrf_max_n, cfg.chrf_beta)});
  out.push_back({"Jaccard", jaccard(cand, ref)});
  out.push_back({"c_coeff", c_coeff(cand, tokenize_code(code))});
  return out;
}

}  // namespace sumeval
