#include "sumeval/vector_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "sumeval/error.hpp"

namespace sumeval {
namespace {

Eigen::RowVectorXd sentence_vector(const EmbeddingRecord& r) {
  if (r.kind != EmbeddingKind::sentence) {
    throw DataError("embedding '" + r.item_id + "' is not a sentence embedding");
  }
  return r.values.row(0);
}

void check_compatible(const EmbeddingRecord& a, const EmbeddingRecord& b) {
  if (a.provider != b.provider) {
    throw DataError("provider mismatch: '" + a.provider + "' vs '" + b.provider + "'");
  }
  if (a.dim() != b.dim()) {
    throw DataError("dimension mismatch for provider '" + a.provider + "': " +
                    std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
  }
}

RowMatrix normalized_rows(const EmbeddingRecord& r) {
  if (r.values.rows() == 0) throw DataError("embedding '" + r.item_id + "' has no tokens");
  RowMatrix out = r.values;
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    const double norm = out.row(i).norm();
    if (norm == 0.0) throw DataError("embedding '" + r.item_id + "' has a zero token row");
    out.row(i) /= norm;
  }
  return out;
}

}  // namespace

Eigen::VectorXd TfIdfModel::vectorize(const TokenStream& text) const {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(vocabulary.size()));
  for (const auto& t : text.tokens) {
    if (const auto it = vocabulary.find(t); it != vocabulary.end()) v(it->second) += 1.0;
  }
  v = v.cwiseProduct(idf);
  const double norm = v.norm();
  if (norm > 0.0) v /= norm;
  return v;
}

TfIdfModel fit_tfidf(const std::vector<TokenStream>& documents) {
  if (documents.empty()) throw DataError("TF-IDF needs at least one document");
  std::map<std::string, int> df;
  for (const auto& doc : documents) {
    const std::set<std::string> unique(doc.tokens.begin(), doc.tokens.end());
    for (const auto& t : unique) ++df[t];
  }
  TfIdfModel model;
  model.document_count = static_cast<int>(documents.size());
  model.idf.resize(static_cast<Eigen::Index>(df.size()));
  Eigen::Index index = 0;
  const double n = model.document_count;
  for (const auto& [term, count] : df) {
    model.vocabulary.emplace(term, index);
    model.idf(index) = std::log((1.0 + n) / (1.0 + count)) + 1.0;
    ++index;
  }
  return model;
}

SimilarityDistance tfidf_scores(const TokenStream& candidate, const TokenStream& reference,
                                const TfIdfModel& model) {
  const Eigen::VectorXd a = model.vectorize(candidate);
  const Eigen::VectorXd b = model.vectorize(reference);
  SimilarityDistance out;
  // Vectors are unit or zero, so the dot product is the cosine.
  out.cosine = std::clamp(a.dot(b), 0.0, 1.0);
  out.euclidean = euclidean_distance(a, b);
  return out;
}

SimilarityDistance embedding_similarity(const EmbeddingRecord& a, const EmbeddingRecord& b,
                                        bool normalize) {
  check_compatible(a, b);
  Eigen::RowVectorXd u = sentence_vector(a);
  Eigen::RowVectorXd v = sentence_vector(b);
  const double nu = u.norm();
  const double nv = v.norm();
  if (nu == 0.0 || nv == 0.0) {
    throw DataError("zero embedding vector in pair ('" + a.item_id + "', '" + b.item_id + "')");
  }
  SimilarityDistance out;
  out.cosine = std::clamp(u.dot(v) / (nu * nv), -1.0, 1.0);
  if (normalize) {
    u /= nu;
    v /= nv;
  }
  out.euclidean = euclidean_distance(u, v);
  return out;
}

PrecisionRecallF1 bertscore(const EmbeddingRecord& candidate_tokens,
                            const EmbeddingRecord& reference_tokens) {
  check_compatible(candidate_tokens, reference_tokens);
  const RowMatrix cand = normalized_rows(candidate_tokens);
  const RowMatrix ref = normalized_rows(reference_tokens);
  const Eigen::MatrixXd sim = cand * ref.transpose();  // |cand| x |ref|
  PrecisionRecallF1 out;
  out.precision = sim.rowwise().maxCoeff().mean();
  out.recall = sim.colwise().maxCoeff().mean();
  const double denom = out.precision + out.recall;
  out.f1 = denom != 0.0 ? 2.0 * out.precision * out.recall / denom : 0.0;
  return out;
}

}  // namespace sumeval
