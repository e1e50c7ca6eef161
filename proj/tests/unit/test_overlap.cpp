#include <cmath>
#include <algorithm>
#include <random>

#include "../oracles.hpp"
#include "doctest.h"
#include "sumeval/overlap.hpp"
#include "sumeval/registry.hpp"

using namespace sumeval;

namespace {

TokenStream ts(std::vector<std::string> t) { return TokenStream{std::move(t), TokenOrigin::summary}; }
TokenStream words(const char* text) { return tokenize_summary(text); }

}  // namespace

TEST_CASE("BLEU examples") {
  CHECK(bleu_n(words("the cat sat"), words("the cat sat"), 1) == 1.0);
  CHECK(bleu_n(words(""), words("the cat"), 1) == 0.0);
  // 2 of 3 unigrams match, no brevity penalty (c == r)
  CHECK(bleu_n(words("the cat ran"), words("the cat sat"), 1) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  // candidate shorter: BP = exp(1 - 4/2)
  CHECK(bleu_n(words("the cat"), words("the cat sat down"), 1) == doctest::Approx(std::exp(-1.0)));
  CHECK(bleu_n(words("the cat"), words("the cat sat down"), 1, false) == 1.0);
  // disjoint vocabularies: smoothed, strictly positive above unigrams
  CHECK(bleu_n(words("a b c"), words("x y z"), 1) == 0.0);
  CHECK(bleu_n(words("a b c"), words("x y z"), 2) == doctest::Approx(1.0 / 3.0));
  CHECK(bleu_a(words("a b c"), words("x y z")) == 0.0);
  // clipping: "the the the" vs "the cat": 1 clipped match of 3
  CHECK(bleu_n(words("the the the"), words("the cat"), 1) == doctest::Approx(1.0 / 3.0));
  CHECK_THROWS(bleu_n(words("a"), words("a"), 5));
}

TEST_CASE("ROUGE examples") {
  const auto r1 = rouge_n(words("the cat was found under the bed"), words("the cat was under the bed"), 1);
  CHECK(r1.precision == doctest::Approx(6.0 / 7.0));
  CHECK(r1.recall == 1.0);
  const auto r2 = rouge_n(words("the cat was found under the bed"), words("the cat was under the bed"), 2);
  CHECK(r2.precision == doctest::Approx(4.0 / 6.0));
  CHECK(r2.recall == doctest::Approx(4.0 / 5.0));
  const auto l = rouge_l(words("a x b"), words("a b"));
  CHECK(l.precision == doctest::Approx(2.0 / 3.0));
  CHECK(l.recall == 1.0);
  CHECK(rouge_l(words(""), words("a")).f1 == 0.0);
  // consecutive matches outweigh scattered ones
  CHECK(weighted_lcs({"a", "b", "c"}, {"a", "b", "c"}, 2.0) == doctest::Approx(9.0));
  CHECK(weighted_lcs({"a", "x", "b"}, {"a", "b"}, 2.0) == doctest::Approx(2.0));
  CHECK(weighted_lcs({"a", "b"}, {"a", "b"}, 2.0) == doctest::Approx(4.0));
  CHECK_THROWS(rouge_w(words("a"), words("a"), 1.0));
}

TEST_CASE("METEOR examples") {
  CHECK(meteor(words("a b c d"), words("a b c d")) == 0.9921875);
  CHECK(meteor(words("x"), words("y")) == 0.0);
  CHECK(meteor(words(""), words("y")) == 0.0);
  // stem stage: "running" ~ "runs"
  CHECK(meteor(words("running fast"), words("runs fast")) > 0.9);
  SynonymTable syn;
  syn.add("quick", {"fast"});
  CHECK(meteor(words("quick"), words("fast")) == 0.0);
  CHECK(meteor(words("quick"), words("fast"), {}, &syn) == doctest::Approx(0.5));
  CHECK(syn.matches("fast", "quick"));
}

TEST_CASE("chrF examples") {
  CHECK(chrf("", "") == 1.0);
  CHECK(chrf("abc", "") == 0.0);
  CHECK(chrf("Hello  World", "hello world") == 1.0);
  CHECK(chrf("abc", "xyz") == 0.0);
  CHECK(chrf("ab", "abc") == doctest::Approx(oracle::chrf("ab", "abc")));
}

TEST_CASE("Jaccard, Levenshtein and c_coeff") {
  CHECK(jaccard(words(""), words("")) == 1.0);
  CHECK(jaccard(words("a b"), words("b c")) == doctest::Approx(1.0 / 3.0));
  CHECK(levenshtein("kitten", "sitting") == 3);
  CHECK(levenshtein("", "abc") == 3);
  CHECK(c_coeff(words("returns user names"), tokenize_code("String getUserName()")) == doctest::Approx(2.0 / 3.0));
  CHECK(c_coeff(words(""), tokenize_code("x")) == 0.0);
}

TEST_CASE("score_overlap follows the registry") {
  const auto scores = score_overlap("sum of values", "sum of values", "int sum(int[] values)");
  const auto& cols = metric_group("overlap").columns;
  REQUIRE(scores.size() == cols.size());
  for (std::size_t i = 0; i < cols.size(); ++i) CHECK(scores[i].name == cols[i]);
}

TEST_CASE("overlap metrics agree with brute-force oracles") {
  std::mt19937_64 rng(20240611);
  for (int trial = 0; trial < 300; ++trial) {
    const auto c = oracle::random_tokens(rng, 8);
    const auto r = oracle::random_tokens(rng, 8);
    const auto code = oracle::random_tokens(rng, 8);
    CAPTURE(oracle::join(c));
    CAPTURE(oracle::join(r));
    for (int n = 1; n <= 4; ++n) {
      CHECK(bleu_n(ts(c), ts(r), n) == doctest::Approx(oracle::bleu_n(c, r, n)).epsilon(1e-12));
      const auto got = rouge_n(ts(c), ts(r), n);
      const auto want = oracle::rouge_n(c, r, n);
      CHECK(got.precision == doctest::Approx(want.p).epsilon(1e-12));
      CHECK(got.recall == doctest::Approx(want.r).epsilon(1e-12));
      CHECK(got.f1 == doctest::Approx(want.f).epsilon(1e-12));
    }
    CHECK(lcs_length(c, r) == static_cast<std::size_t>(oracle::lcs_exhaustive(c, r)));
    CHECK(rouge_l(ts(c), ts(r)).f1 == doctest::Approx(oracle::rouge_l(c, r).f).epsilon(1e-12));
    CHECK(weighted_lcs(c, r, 1.2) == doctest::Approx(oracle::wlcs(c, r, 1.2)).epsilon(1e-12));
    CHECK(meteor(ts(c), ts(r)) == doctest::Approx(oracle::meteor(c, r)).epsilon(1e-12));
    CHECK(chrf(oracle::join(c), oracle::join(r)) ==
          doctest::Approx(oracle::chrf(oracle::join(c), oracle::join(r))).epsilon(1e-12));
    CHECK(jaccard(ts(c), ts(r)) == doctest::Approx(oracle::jaccard(c, r)).epsilon(1e-12));
    CHECK(c_coeff(ts(c), ts(code)) == doctest::Approx(oracle::c_coeff(c, code)).epsilon(1e-12));
  }
}

TEST_CASE("overlap properties") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const auto c = oracle::random_tokens(rng, 7);
    const auto r = oracle::random_tokens(rng, 7);
    // symmetric metrics
    CHECK(jaccard(ts(c), ts(r)) == jaccard(ts(r), ts(c)));
    CHECK(rouge_n(ts(c), ts(r), 1).f1 == doctest::Approx(rouge_n(ts(r), ts(c), 1).f1));
    // ranges
    for (const auto& s : score_overlap(oracle::join(c), oracle::join(r), oracle::join(r))) {
      CAPTURE(s.name);
      CHECK(s.value >= 0.0);
      CHECK(s.value <= 1.0);
    }
    // identity
    if (!c.empty()) {
      for (const auto& s : score_overlap(oracle::join(c), oracle::join(c), oracle::join(c))) {
        CAPTURE(s.name);
        if (s.name == "METEOR") {
          const double m = static_cast<double>(c.size());
          CHECK(s.value == doctest::Approx(1.0 - 0.5 / (m * m * m)));
        } else if (s.name.rfind("BLEU", 0) == 0 || s.name.rfind("ROUGE-W", 0) == 0) {
          CHECK(s.value == doctest::Approx(1.0).epsilon(1e-12));
        } else if (s.name.rfind("ROUGE-", 0) == 0 && s.name[6] >= '2' && s.name[6] <= '4' &&
                   static_cast<int>(c.size()) < s.name[6] - '0') {
          CHECK(s.value == 0.0);  // no n-grams of that order
        } else {
          CHECK(s.value == 1.0);
        }
      }
    }
  }
}

TEST_CASE("directed metrics are asymmetric") {
  // BLEU: short candidate inside a long reference has perfect precision but pays the brevity penalty
  const auto shorter = words("the user name");
  const auto longer = words("returns the user name of the account");
  CHECK(bleu_n(shorter, longer, 1) != bleu_n(longer, shorter, 1));
  CHECK(chrf("abc", "abcdef") != chrf("abcdef", "abc"));
}

TEST_CASE("ROUGE-N F1 is the harmonic mean of its P and R") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 300; ++trial) {
    const auto c = oracle::random_tokens(rng, 9), r = oracle::random_tokens(rng, 9);
    for (int n = 1; n <= 4; ++n) {
      const auto s = rouge_n(ts(c), ts(r), n);
      CHECK(s.f1 == doctest::Approx(oracle::f1(s.precision, s.recall)).epsilon(1e-15));
    }
  }
}

TEST_CASE("extending the candidate with the aligned reference token never lowers matched unigrams") {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 300; ++trial) {
    auto c = oracle::random_tokens(rng, 8);
    const auto r = oracle::random_tokens(rng, 10);
    if (c.size() >= r.size()) continue;
    const double before = oracle::clipped(oracle::ngrams(c, 1), oracle::ngrams(r, 1));
    c.push_back(r[c.size()]);
    const double after = oracle::clipped(oracle::ngrams(c, 1), oracle::ngrams(r, 1));
    CHECK(after >= before);
    CHECK(bleu_n(ts(c), ts(r), 1, false) * static_cast<double>(c.size()) == doctest::Approx(after));
  }
}

TEST_CASE("c_coeff ignores code token order and repetition") {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 200; ++trial) {
    const auto s = oracle::random_tokens(rng, 8);
    auto code = oracle::random_tokens(rng, 8);
    const double base = c_coeff(ts(s), TokenStream{code, TokenOrigin::code});
    std::shuffle(code.begin(), code.end(), rng);
    const auto dup = code;
    code.insert(code.end(), dup.begin(), dup.end());
    CHECK(c_coeff(ts(s), TokenStream{code, TokenOrigin::code}) == base);
  }
}

TEST_CASE("fuzzed text always yields finite in-range scores") {
  std::mt19937_64 rng(34);
  std::uniform_int_distribution<int> byte(1, 255), len(0, 30);
  for (int trial = 0; trial < 300; ++trial) {
    std::string a, b, code;
    for (auto* s : {&a, &b, &code}) {
      for (int i = len(rng); i > 0; --i) s->push_back(static_cast<char>(byte(rng)));
    }
    for (const auto& m : score_overlap(a, b, code)) {
      CAPTURE(m.name);
      CHECK(std::isfinite(m.value));
      CHECK(m.value >= m.lo);
      CHECK(m.value <= m.hi);
    }
  }
}
