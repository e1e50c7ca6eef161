#pragma once

// TF-IDF similarity computed natively, plus metrics derived from ingested
// embedding records (sentence cosine/Euclidean, greedy-matching BERTScore).

#include <Eigen/Core>
#include <map>
#include <string>
#include <vector>

#include "sumeval/corpus.hpp"
#include "sumeval/metric_score.hpp"
#include "sumeval/text.hpp"

namespace sumeval {

struct SimilarityDistance {
  double cosine = 0.0;
  double euclidean = 0.0;
};

template <class DerivedA, class DerivedB>
typename DerivedA::Scalar cosine_similarity(const Eigen::MatrixBase<DerivedA>& a,
                                            const Eigen::MatrixBase<DerivedB>& b) {
  return a.dot(b) / (a.norm() * b.norm());
}

template <class DerivedA, class DerivedB>
typename DerivedA::Scalar euclidean_distance(const Eigen::MatrixBase<DerivedA>& a,
                                             const Eigen::MatrixBase<DerivedB>& b) {
  return (a - b).norm();
}

/// Vocabulary indices are dense 0..|V|-1 and assigned in lexicographic term
/// order, so a fit is independent of document order.
struct TfIdfModel {
  std::map<std::string, Eigen::Index> vocabulary;
  Eigen::VectorXd idf;
  int document_count = 0;

  /// Raw term counts times idf, L2-normalized. Out-of-vocabulary terms are
  /// dropped; a text with no known term maps to the zero vector.
  Eigen::VectorXd vectorize(const TokenStream& text) const;
};

/// idf(t) = ln((1 + N) / (1 + df(t))) + 1. Throws DataError on an empty corpus.
TfIdfModel fit_tfidf(const std::vector<TokenStream>& documents);

/// Cosine and Euclidean distance of the normalized TF-IDF vectors. Two zero
/// vectors give (0, 0).
SimilarityDistance tfidf_scores(const TokenStream& candidate, const TokenStream& reference,
                                const TfIdfModel& model);

/// Both records must be sentence embeddings of one provider and dimension.
/// With `normalize` the Euclidean distance is taken between unit vectors.
/// Throws DataError on mismatch or a zero vector.
SimilarityDistance embedding_similarity(const EmbeddingRecord& a, const EmbeddingRecord& b,
                                        bool normalize = false);

/// Greedy cosine matching between token rows: recall averages, over
/// reference tokens, the best similarity to any candidate token; precision
/// is the mirror image. No idf weighting, no baseline rescaling.
PrecisionRecallF1 bertscore(const EmbeddingRecord& candidate_tokens,
                            const EmbeddingRecord& reference_tokens);

}  // namespace sumeval
