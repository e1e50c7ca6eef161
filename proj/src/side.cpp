#include "sumeval/side.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <numeric>

#include "sumeval/error.hpp"
#include "sumeval/vector_metrics.hpp"

namespace sumeval {

double side_score(const EmbeddingRecord& code_embedding, const EmbeddingRecord& summary_embedding) {
  for (const auto* r : {&code_embedding, &summary_embedding}) {
    if (r->provider != kSideProvider) {
      throw DataError("SIDE needs '" + std::string(kSideProvider) + "' embeddings, got '" +
                      r->provider + "' for '" + r->item_id + "'");
    }
  }
  return embedding_similarity(code_embedding, summary_embedding).cosine;
}

double checkpoint_score(std::span<const double> pos_sims, std::span<const double> neg_sims,
                        bool halved) {
  if (pos_sims.size() != neg_sims.size()) {
    throw DataError("positive and negative similarity lists differ in length (" +
                    std::to_string(pos_sims.size()) + " vs " + std::to_string(neg_sims.size()) + ")");
  }
  if (pos_sims.empty()) throw DataError("checkpoint score needs at least one validation item");
  double sum = 0.0;
  for (std::size_t i = 0; i < pos_sims.size(); ++i) sum += pos_sims[i] - neg_sims[i];
  const double score = sum / static_cast<double>(pos_sims.size());
  return halved ? score / 2.0 : score;
}

std::vector<CheckpointEvaluation> rank_checkpoints(std::vector<CheckpointEvaluation> evaluations) {
  std::stable_sort(evaluations.begin(), evaluations.end(),
                   [](const CheckpointEvaluation& a, const CheckpointEvaluation& b) {
                     if (a.score != b.score) return a.score > b.score;
                     if (a.step != b.step) return a.step > b.step;
                     return a.checkpoint_id < b.checkpoint_id;
                   });
  return evaluations;
}

std::vector<CheckpointEvaluation> evaluate_checkpoints(const std::vector<SimilarityRow>& pos,
                                                       const std::vector<SimilarityRow>& neg,
                                                       bool halved) {
  auto group = [](const std::vector<SimilarityRow>& rows) {
    std::vector<std::pair<std::string, std::vector<const SimilarityRow*>>> groups;
    for (const auto& r : rows) {
      auto it = std::find_if(groups.begin(), groups.end(), [&r](const auto& g) { return g.first == r.checkpoint_id; });
      if (it == groups.end()) {
        groups.emplace_back(r.checkpoint_id, std::vector<const SimilarityRow*>{});
        it = std::prev(groups.end());
      }
      it->second.push_back(&r);
    }
    return groups;
  };
  const auto pos_groups = group(pos);
  const auto neg_groups = group(neg);
  if (pos_groups.empty()) throw DataError("checkpoint score needs at least one validation item");

  std::vector<CheckpointEvaluation> out;
  for (const auto& [id, pos_rows] : pos_groups) {
    const auto it = std::find_if(neg_groups.begin(), neg_groups.end(), [&id](const auto& g) { return g.first == id; });
    if (it == neg_groups.end()) throw DataError("checkpoint '" + id + "' has no negative similarities");
    const auto& neg_rows = it->second;
    if (pos_rows.size() != neg_rows.size()) {
      throw DataError("checkpoint '" + id + "': " + std::to_string(pos_rows.size()) + " positive vs " +
                      std::to_string(neg_rows.size()) + " negative similarities");
    }
    std::vector<double> p;
    std::vector<double> n;
    for (std::size_t i = 0; i < pos_rows.size(); ++i) {
      if (!pos_rows[i]->item_id.empty() && !neg_rows[i]->item_id.empty() &&
          pos_rows[i]->item_id != neg_rows[i]->item_id) {
        throw DataError("checkpoint '" + id + "': row " + std::to_string(i + 1) + " pairs item '" +
                        pos_rows[i]->item_id + "' with '" + neg_rows[i]->item_id + "'");
      }
      p.push_back(pos_rows[i]->similarity);
      n.push_back(neg_rows[i]->similarity);
    }
    out.push_back({id, checkpoint_step(id), checkpoint_score(p, n, halved)});
  }
  for (const auto& g : neg_groups) {
    if (std::none_of(pos_groups.begin(), pos_groups.end(), [&g](const auto& pg) { return pg.first == g.first; })) {
      throw DataError("checkpoint '" + g.first + "' has no positive similarities");
    }
  }
  return rank_checkpoints(std::move(out));
}

long long checkpoint_step(std::string_view checkpoint_id) {
  std::size_t start = checkpoint_id.size();
  while (start > 0 && std::isdigit(static_cast<unsigned char>(checkpoint_id[start - 1]))) --start;
  long long step = 0;
  std::from_chars(checkpoint_id.data() + start, checkpoint_id.data() + checkpoint_id.size(), step);
  return step;
}

}  // namespace sumeval
