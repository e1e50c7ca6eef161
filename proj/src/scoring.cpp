#include "sumeval/scoring.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>
#include <set>
#include <thread>
#include <unordered_map>

#include "sumeval/error.hpp"
#include "sumeval/overlap.hpp"
#include "sumeval/registry.hpp"
#include "sumeval/side.hpp"
#include "sumeval/vector_metrics.hpp"

namespace sumeval {
namespace {

constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

class EmbeddingIndex {
 public:
  explicit EmbeddingIndex(const std::vector<EmbeddingRecord>& records) {
    for (const auto& r : records) {
      providers_.insert(r.provider);
      index_.emplace(r.provider + '\n' + r.item_id, &r);
    }
  }

  bool has_provider(const std::string& provider) const { return providers_.count(provider) != 0; }

  const EmbeddingRecord* find(const std::string& provider, const std::string& item) const {
    const auto it = index_.find(provider + '\n' + item);
    return it == index_.end() ? nullptr : it->second;
  }

 private:
  std::set<std::string> providers_;
  std::unordered_map<std::string, const EmbeddingRecord*> index_;
};

struct GroupPlan {
  const MetricGroup* group;
  Eigen::Index first_column;
  bool active;
};

// Fills one group's cells for one pair; returns false when an embedding item
// is missing.
bool score_group(const GroupPlan& plan, const SummaryPair& pair, const ScoringConfig& cfg,
                 const OverlapConfig& overlap, const TfIdfModel* tfidf, const EmbeddingIndex& index,
                 double* row) {
  const std::string& name = plan.group->name;
  if (name == "overlap") {
    const auto scores = score_overlap(pair.candidate, pair.reference, pair.code, overlap);
    for (std::size_t k = 0; k < scores.size(); ++k) row[k] = scores[k].value;
    return true;
  }
  if (name == "tfidf") {
    const auto s = tfidf_scores(tokenize_summary(pair.candidate), tokenize_summary(pair.reference), *tfidf);
    row[0] = s.cosine;
    row[1] = s.euclidean;
    return true;
  }

  const std::string& provider = plan.group->provider;
  const bool against_code = name == "codet5p" || name == "side";
  const EmbeddingRecord* cand = index.find(provider, embedding_item_id(pair.pair_id, "candidate"));
  const EmbeddingRecord* other =
      index.find(provider, embedding_item_id(pair.pair_id, against_code ? "code" : "reference"));
  if (cand == nullptr || other == nullptr) return false;

  if (name == "bertscore") {
    const auto s = bertscore(*cand, *other);
    row[0] = s.precision;
    row[1] = s.recall;
    row[2] = s.f1;
  } else if (name == "side") {
    row[0] = side_score(*other, *cand);
  } else if (name == "codet5p") {
    row[0] = embedding_similarity(*cand, *other, cfg.normalize).cosine;
  } else {
    const auto s = embedding_similarity(*cand, *other, cfg.normalize);
    row[0] = s.cosine;
    row[1] = s.euclidean;
  }
  return true;
}

}  // namespace

std::string embedding_item_id(const std::string& pair_id, const char* role) { return pair_id + ":" + role; }

ScoreResult score_pairs(const std::vector<SummaryPair>& pairs,
                        const std::vector<EmbeddingRecord>& embeddings, const ScoringConfig& cfg) {
  const EmbeddingIndex index(embeddings);
  ScoreResult result;

  std::vector<GroupPlan> plans;
  for (const auto& group_name : cfg.enabled_groups()) {
    const MetricGroup& g = metric_group(group_name);
    const auto first = static_cast<Eigen::Index>(result.table.columns.size());
    result.table.columns.insert(result.table.columns.end(), g.columns.begin(), g.columns.end());
    const bool active = g.provider.empty() || index.has_provider(g.provider);
    if (!active) result.skipped.push_back({g.name, g.columns, "no embeddings from provider '" + g.provider + "'"});
    plans.push_back({&g, first, active});
  }
  if (cfg.strict && !result.skipped.empty()) {
    std::string names;
    for (const auto& s : result.skipped) names += (names.empty() ? "" : ", ") + s.group + " (" + s.reason + ")";
    throw DataError("strict mode: metric groups lack inputs: " + names);
  }

  std::optional<SynonymTable> synonyms;
  if (!cfg.synonyms.empty()) synonyms = SynonymTable::load(cfg.synonyms);
  OverlapConfig overlap;
  overlap.brevity_penalty = cfg.brevity_penalty;
  overlap.rouge_w_weight = cfg.rouge_w_weight;
  overlap.meteor = cfg.meteor;
  overlap.chrf_max_n = cfg.chrf_max_n;
  overlap.chrf_beta = cfg.chrf_beta;
  overlap.synonyms = synonyms ? &*synonyms : nullptr;

  std::optional<TfIdfModel> tfidf;
  const auto& enabled = cfg.enabled_groups();
  if (!pairs.empty() && std::find(enabled.begin(), enabled.end(), "tfidf") != enabled.end()) {
    std::vector<TokenStream> docs;
    for (const auto& p : pairs) {
      docs.push_back(tokenize_summary(p.candidate));
      docs.push_back(tokenize_summary(p.reference));
    }
    tfidf = fit_tfidf(docs);
  }

  const auto n = static_cast<Eigen::Index>(pairs.size());
  const auto width = static_cast<Eigen::Index>(result.table.columns.size());
  // Row-major scratch so each worker writes one contiguous row.
  RowMatrix values = RowMatrix::Constant(n, width, kMissing);
  std::vector<std::vector<char>> missing(plans.size(), std::vector<char>(pairs.size(), 0));

  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::size_t error_row = pairs.size();
  std::exception_ptr error;
  auto worker = [&] {
    for (std::size_t i = next++; i < pairs.size(); i = next++) {
      try {
        for (std::size_t g = 0; g < plans.size(); ++g) {
          if (!plans[g].active) continue;
          double* row = values.row(static_cast<Eigen::Index>(i)).data() + plans[g].first_column;
          if (!score_group(plans[g], pairs[i], cfg, overlap, tfidf ? &*tfidf : nullptr, index, row)) {
            missing[g][i] = 1;
          }
        }
      } catch (...) {
        const std::lock_guard<std::mutex> lock(error_mutex);
        if (i < error_row) {
          error_row = i;
          error = std::current_exception();
        }
      }
    }
  };
  unsigned threads = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads) : std::thread::hardware_concurrency();
  threads = std::clamp<unsigned>(threads, 1, static_cast<unsigned>(std::max<std::size_t>(pairs.size(), 1)));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }
  if (error) {
    try {
      std::rethrow_exception(error);
    } catch (const std::exception& e) {
      throw DataError("pair '" + pairs[error_row].pair_id + "': " + e.what());
    }
  }

  for (std::size_t g = 0; g < plans.size(); ++g) {
    const int count = static_cast<int>(std::count(missing[g].begin(), missing[g].end(), 1));
    if (count == 0) continue;
    if (cfg.strict) {
      const auto first = std::find(missing[g].begin(), missing[g].end(), 1) - missing[g].begin();
      throw DataError("strict mode: pair '" + pairs[static_cast<std::size_t>(first)].pair_id + "' lacks '" +
                      plans[g].group->provider + "' embeddings");
    }
    result.missing_items[plans[g].group->name] = count;
  }

  for (const auto& p : pairs) result.table.pair_ids.push_back(p.pair_id);
  result.table.values = values;
  return result;
}

}  // namespace sumeval
