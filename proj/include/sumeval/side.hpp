#pragma once

// SIDE score (cosine between contrastively trained code and summary
// embeddings) and validation-based checkpoint selection.

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sumeval/corpus.hpp"

namespace sumeval {

inline constexpr std::string_view kSideProvider = "side-encoder";

/// Cosine similarity in [-1, 1]. Both records must come from the
/// side-encoder provider with equal dimension; throws DataError otherwise or
/// on a zero vector.
double side_score(const EmbeddingRecord& code_embedding, const EmbeddingRecord& summary_embedding);

/// Mean of pos[i] - neg[i]. A model scoring every positive 1 and every
/// negative -1 reaches 2; `halved` divides by two so that model reaches 1.
double checkpoint_score(std::span<const double> pos_sims, std::span<const double> neg_sims,
                        bool halved = false);

struct CheckpointEvaluation {
  std::string checkpoint_id;
  long long step = 0;
  double score = 0.0;

  bool operator==(const CheckpointEvaluation&) const = default;
};

/// Best first. Equal scores prefer the later training step, then the
/// lexicographically smaller id.
std::vector<CheckpointEvaluation> rank_checkpoints(std::vector<CheckpointEvaluation> evaluations);

/// Groups both similarity files by checkpoint (first-seen order), pairs
/// positives and negatives row by row and ranks the resulting scores. Item
/// ids, when both files carry them, must agree row by row.
std::vector<CheckpointEvaluation> evaluate_checkpoints(const std::vector<SimilarityRow>& pos,
                                                       const std::vector<SimilarityRow>& neg,
                                                       bool halved = false);

/// Trailing integer of a checkpoint name ("checkpoint-15000" -> 15000), or 0.
long long checkpoint_step(std::string_view checkpoint_id);

}  // namespace sumeval
