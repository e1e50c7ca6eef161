#include <cmath>

#include "doctest.h"
#include "sumeval/error.hpp"
#include "sumeval/overlap.hpp"
#include "sumeval/registry.hpp"
#include "sumeval/scoring.hpp"
#include "sumeval/side.hpp"

using namespace sumeval;

namespace {

std::vector<SummaryPair> pairs() {
  return {
      {"a", "returns the sum of two values", "returns the sum", "int sum(int a, int b) { return a + b; }"},
      {"b", "reads a file", "loads the configuration file", "Config load(Path p) { return parse(read(p)); }"},
      {"c", "", "closes the stream", "void close() { in.close(); }"},
      {"d", "gets the user name", "returns the user name", "String getUserName() { return name; }"},
  };
}

EmbeddingRecord sentence(const std::string& id, const char* provider, std::vector<double> v) {
  EmbeddingRecord r{id, provider, EmbeddingKind::sentence, RowMatrix(1, static_cast<Eigen::Index>(v.size()))};
  for (std::size_t i = 0; i < v.size(); ++i) r.values(0, static_cast<Eigen::Index>(i)) = v[i];
  return r;
}

Eigen::Index col(const MetricTable& t, const std::string& name) {
  return std::find(t.columns.begin(), t.columns.end(), name) - t.columns.begin();
}

}  // namespace

TEST_CASE("registry layout") {
  CHECK(metric_group("overlap").columns.size() == 27);
  CHECK(registered_metrics().size() == 27 + 2 + 3 + 2 + 2 + 2 + 1 + 1);
  CHECK(registered_metrics().front() == "BLEU-1");
  CHECK(is_registered_metric("SIDE"));
  CHECK_FALSE(is_registered_metric("BLEU-5"));
  CHECK_THROWS_AS(metric_group("nope"), DataError);
  CHECK(metric_group("side").provider == kSideProvider);
}

TEST_CASE("overlap-only scoring gives 27 columns") {
  ScoringConfig cfg;
  cfg.metrics = {"overlap"};
  const auto r = score_pairs(pairs(), {}, cfg);
  CHECK(r.table.columns == metric_group("overlap").columns);
  CHECK(r.table.pair_ids == std::vector<std::string>{"a", "b", "c", "d"});
  CHECK(r.skipped.empty());
  const auto direct = score_overlap(pairs()[1].candidate, pairs()[1].reference, pairs()[1].code);
  for (std::size_t j = 0; j < direct.size(); ++j) CHECK(r.table.values(1, static_cast<Eigen::Index>(j)) == direct[j].value);
  CHECK(r.table.values(2, col(r.table, "BLEU-1")) == 0.0);
}

TEST_CASE("absent providers are skipped, not fatal") {
  const auto r = score_pairs(pairs(), {}, ScoringConfig{});
  CHECK(r.table.columns == registered_metrics());
  CHECK(r.skipped.size() == 6);
  CHECK(std::isnan(r.table.values(0, col(r.table, "SIDE"))));
  CHECK_FALSE(std::isnan(r.table.values(0, col(r.table, "TF-IDF_CS"))));
  ScoringConfig strict;
  strict.strict = true;
  CHECK_THROWS_AS(score_pairs(pairs(), {}, strict), DataError);
}

TEST_CASE("embedding groups and missing items") {
  std::vector<EmbeddingRecord> emb;
  for (const char* id : {"a", "b", "c"}) {
    emb.push_back(sentence(embedding_item_id(id, "candidate"), "use", {1, 0}));
    emb.push_back(sentence(embedding_item_id(id, "reference"), "use", {1, 1}));
    emb.push_back(sentence(embedding_item_id(id, "code"), "side-encoder", {0, 2}));
    emb.push_back(sentence(embedding_item_id(id, "candidate"), "side-encoder", {0, 1}));
  }
  ScoringConfig cfg;
  cfg.metrics = {"use", "side"};
  const auto r = score_pairs(pairs(), emb, cfg);
  CHECK(r.table.columns == std::vector<std::string>{"USE_CS", "USE_ED", "SIDE"});
  CHECK(r.table.values(0, 0) == doctest::Approx(1 / std::sqrt(2.0)));
  CHECK(r.table.values(0, 1) == doctest::Approx(1.0));
  CHECK(r.table.values(1, 2) == doctest::Approx(1.0));
  CHECK(std::isnan(r.table.values(3, 0)));
  CHECK(r.missing_items.at("use") == 1);
  CHECK(r.missing_items.at("side") == 1);

  cfg.normalize = true;
  const auto n = score_pairs(pairs(), emb, cfg);
  CHECK(n.table.values(0, 1) == doctest::Approx(std::sqrt(2 - std::sqrt(2.0))));
  cfg.strict = true;
  CHECK_THROWS_AS(score_pairs(pairs(), emb, cfg), DataError);
}

TEST_CASE("thread count does not change results") {
  std::vector<SummaryPair> many;
  for (int i = 0; i < 60; ++i) {
    auto p = pairs()[static_cast<std::size_t>(i % 4)];
    p.pair_id = "x" + std::to_string(i);
    p.candidate += " " + std::to_string(i % 7);
    many.push_back(p);
  }
  ScoringConfig one, eight;
  one.threads = 1;
  eight.threads = 8;
  CHECK(score_pairs(many, {}, one).table == score_pairs(many, {}, eight).table);
}

TEST_CASE("row failures name the pair") {
  std::vector<EmbeddingRecord> emb{sentence("a:candidate", "use", {0, 0}), sentence("a:reference", "use", {1, 0})};
  ScoringConfig cfg;
  cfg.metrics = {"use"};
  try {
    score_pairs(pairs(), emb, cfg);
    FAIL("expected a DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("'a'") != std::string::npos);
  }
}
