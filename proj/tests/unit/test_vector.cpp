#include <cmath>
#include <random>

#include "doctest.h"
#include "sumeval/error.hpp"
#include "sumeval/vector_metrics.hpp"

using namespace sumeval;

namespace {

EmbeddingRecord sentence(const char* id, const char* provider, std::vector<double> v) {
  EmbeddingRecord r{id, provider, EmbeddingKind::sentence, RowMatrix(1, static_cast<Eigen::Index>(v.size()))};
  for (std::size_t i = 0; i < v.size(); ++i) r.values(0, static_cast<Eigen::Index>(i)) = v[i];
  return r;
}

EmbeddingRecord tokens(const char* id, RowMatrix m) {
  return {id, "bert-token", EmbeddingKind::token_matrix, std::move(m)};
}

}  // namespace

TEST_CASE("unit vectors satisfy euclid^2 = 2 - 2 cos") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::VectorXd a(16), b(16);
    for (Eigen::Index i = 0; i < 16; ++i) {
      a(i) = g(rng);
      b(i) = g(rng);
    }
    a.normalize();
    b.normalize();
    const double c = cosine_similarity(a, b);
    const double e = euclidean_distance(a, b);
    CHECK(e * e == doctest::Approx(2.0 - 2.0 * c).epsilon(1e-12));
  }
}

TEST_CASE("TF-IDF weights and similarity") {
  const std::vector<TokenStream> docs{tokenize_summary("a b"), tokenize_summary("a c"), tokenize_summary("a")};
  const auto model = fit_tfidf(docs);
  REQUIRE(model.vocabulary.size() == 3);
  CHECK(model.vocabulary.at("a") == 0);
  CHECK(model.vocabulary.at("c") == 2);
  CHECK(model.idf(0) == doctest::Approx(1.0));
  CHECK(model.idf(1) == doctest::Approx(std::log(4.0 / 2.0) + 1.0));

  const auto v = model.vectorize(tokenize_summary("a b"));
  CHECK(v.norm() == doctest::Approx(1.0));
  CHECK(v(1) / v(0) == doctest::Approx(model.idf(1)));
  CHECK(model.vectorize(tokenize_summary("zzz")).norm() == 0.0);

  const auto same = tfidf_scores(docs[0], docs[0], model);
  CHECK(same.cosine == doctest::Approx(1.0));
  CHECK(same.euclidean == doctest::Approx(0.0));
  const auto none = tfidf_scores(tokenize_summary("q"), tokenize_summary("r"), model);
  CHECK(none.cosine == 0.0);
  CHECK(none.euclidean == 0.0);

  // fit is independent of document order
  const auto reversed = fit_tfidf({docs[2], docs[1], docs[0]});
  CHECK(reversed.idf.isApprox(model.idf));
  CHECK_THROWS_AS(fit_tfidf({}), DataError);
}

TEST_CASE("sentence embedding similarity") {
  const auto a = sentence("x", "use", {3, 4});
  const auto b = sentence("y", "use", {6, 8});
  const auto s = embedding_similarity(a, b);
  CHECK(s.cosine == doctest::Approx(1.0));
  CHECK(s.euclidean == doctest::Approx(5.0));
  CHECK(embedding_similarity(a, b, true).euclidean == doctest::Approx(0.0).epsilon(1e-12));
  CHECK_THROWS_AS(embedding_similarity(a, sentence("z", "infersent", {1, 0})), DataError);
  CHECK_THROWS_AS(embedding_similarity(a, sentence("z", "use", {0, 0})), DataError);
  CHECK_THROWS_AS(embedding_similarity(a, sentence("z", "use", {1, 0, 0})), DataError);
}

TEST_CASE("BERTScore greedy matching") {
  RowMatrix c(2, 2), r(3, 2);
  c << 1, 0, 0, 1;
  r << 1, 0, 1, 0, 1, 1;
  const auto s = bertscore(tokens("c", c), tokens("r", r));
  const double h = 1.0 / std::sqrt(2.0);
  // precision: each candidate token's best match; recall: each reference token's
  CHECK(s.precision == doctest::Approx((1.0 + h) / 2.0));
  CHECK(s.recall == doctest::Approx((1.0 + 1.0 + h) / 3.0));
  CHECK(s.f1 == doctest::Approx(2 * s.precision * s.recall / (s.precision + s.recall)));
  const auto self = bertscore(tokens("c", c), tokens("c", c));
  CHECK(self.f1 == doctest::Approx(1.0));
}

TEST_CASE("vector metric properties") {
  std::mt19937_64 rng(41);
  std::normal_distribution<double> g;
  auto vec = [&](Eigen::Index d) {
    Eigen::VectorXd v(d);
    for (Eigen::Index i = 0; i < d; ++i) v(i) = g(rng);
    return v;
  };
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = vec(8), b = vec(8), c = vec(8);
    CHECK(cosine_similarity(a, b) == cosine_similarity(b, a));
    CHECK(euclidean_distance(a, c) <= euclidean_distance(a, b) + euclidean_distance(b, c) + 1e-12);

    RowMatrix ta(3, 4), tb(5, 4);
    for (Eigen::Index i = 0; i < ta.size(); ++i) ta.data()[i] = g(rng);
    for (Eigen::Index i = 0; i < tb.size(); ++i) tb.data()[i] = g(rng);
    const auto ab = bertscore(tokens("a", ta), tokens("b", tb));
    const auto ba = bertscore(tokens("b", tb), tokens("a", ta));
    CHECK(ab.precision == doctest::Approx(ba.recall).epsilon(1e-15));
    CHECK(ab.recall == doctest::Approx(ba.precision).epsilon(1e-15));
  }
  const std::vector<TokenStream> docs{tokenize_summary("get user name"), tokenize_summary("set user id"),
                                      tokenize_summary("close the stream"), tokenize_summary("name name id")};
  const auto model = fit_tfidf(docs);
  for (const auto& x : docs) {
    for (const auto& y : docs) {
      const double cs = tfidf_scores(x, y, model).cosine;
      CHECK(cs >= 0.0);
      CHECK(cs <= 1.0 + 1e-15);
    }
  }
}
