#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "nbayes/error.hpp"
#include "nbayes/vectorizer.hpp"
#include "support/oracles.hpp"

using namespace nbayes;

namespace {

std::vector<TokenStream> d1_d2() {
  PipelineConfig cfg;
  return {tokenize("Each state has its own laws.", cfg), tokenize("Every country has its own culture.", cfg)};
}

std::vector<double> dense(const SparseVector& v, std::size_t n) {
  std::vector<double> out(n, 0.0);
  for (const auto& [id, x] : v.entries) out.at(id) = x;
  return out;
}

}  // namespace

TEST_SUITE("vectorizer") {
  TEST_CASE("vocabulary of the two-document example") {
    const auto docs = d1_d2();
    const auto vocab = Vocabulary::build(docs);
    const std::vector<std::string> expected = {"each", "state", "has",   "its",    "own",
                                               "laws", "every", "country", "culture"};
    CHECK(vocab.tokens() == expected);
    CHECK(vocab.total_documents() == 2);

    std::vector<double> aggregate(vocab.size(), 0.0);
    for (const auto& d : docs) {
      const auto v = vectorize(d, vocab, WeightingMode::raw_count);
      for (const auto& [id, x] : v.entries) aggregate[id] += x;
    }
    CHECK(aggregate == std::vector<double>{1, 1, 2, 2, 2, 1, 1, 1, 1});
  }

  TEST_CASE("two-document rows") {
    const auto docs = d1_d2();
    const auto vocab = Vocabulary::build(docs);
    CHECK(dense(vectorize(docs[0], vocab, WeightingMode::raw_count), 9) ==
          std::vector<double>{1, 1, 1, 1, 1, 1, 0, 0, 0});
    CHECK(dense(vectorize(docs[1], vocab, WeightingMode::binary), 9) ==
          std::vector<double>{0, 0, 1, 1, 1, 0, 1, 1, 1});
  }

  TEST_CASE("document frequencies") {
    std::vector<TokenStream> one = {{"x", "x", "x"}};
    auto v1 = Vocabulary::build(one);
    CHECK(v1.size() == 1);
    CHECK(v1.document_frequency(0) == 1);

    std::vector<TokenStream> three = {{"a"}, {"a"}, {"b"}};
    auto v3 = Vocabulary::build(three);
    CHECK(v3.document_frequency(*v3.find("a")) == 2);
    CHECK(v3.document_frequency(*v3.find("b")) == 1);
    CHECK(v3.total_documents() == 3);
    CHECK_FALSE(v3.find("zzz").has_value());
  }

  TEST_CASE("normalized tf counts out-of-vocabulary tokens in the length") {
    std::vector<TokenStream> train = {{"a", "b"}};
    auto vocab = Vocabulary::build(train);
    auto v = vectorize({"a", "a", "b", "c"}, vocab, WeightingMode::normalized_tf);
    CHECK(v.doc_length == 4);
    CHECK(v.entries.size() == 2);
    CHECK(v.value(*vocab.find("a")) == 2.0 / 4.0);
    CHECK(v.value(*vocab.find("b")) == 1.0 / 4.0);
  }

  TEST_CASE("idf") {
    std::vector<TokenStream> two = {{"t", "u"}, {"t"}};
    auto v2 = Vocabulary::build(two);
    CHECK(idf(v2, *v2.find("t")) == 0.0);
    CHECK(idf(v2, *v2.find("u")) == doctest::Approx(0.6931).epsilon(1e-4));
    CHECK(idf(v2, *v2.find("u")) == std::log(2.0));

    Vocabulary big({"rare"}, {10}, 1000);
    CHECK(idf(big, 0) == doctest::Approx(4.6052).epsilon(1e-4));
    CHECK(std::abs(idf(big, 0) - std::log(100.0)) < 1e-12);
  }

  TEST_CASE("tfidf drops terms present in every document") {
    std::vector<TokenStream> two = {{"t", "u", "u"}, {"t"}};
    auto vocab = Vocabulary::build(two);
    auto v = vectorize(two[0], vocab, WeightingMode::tfidf);
    CHECK(v.entries.size() == 1);
    CHECK(std::abs(v.value(*vocab.find("u")) - (2.0 / 3.0) * std::log(2.0)) < 1e-15);
  }

  TEST_CASE("vocabulary validation") {
    CHECK_THROWS_AS(Vocabulary({"a"}, {0}, 3), InvalidArgument);
    CHECK_THROWS_AS(Vocabulary({"a"}, {4}, 3), InvalidArgument);
    CHECK_THROWS_AS(Vocabulary({"a", "a"}, {1, 1}, 3), InvalidArgument);
    CHECK_THROWS_AS(Vocabulary({"a"}, {1, 1}, 3), InvalidArgument);
  }

  TEST_CASE("dump lists id, token and document frequency") {
    std::vector<TokenStream> c = {{"b", "a"}, {"a"}};
    std::ostringstream out;
    Vocabulary::build(c).dump(out);
    CHECK(out.str() == "0\tb\t1\n1\ta\t2\n");
  }

  TEST_CASE("weighting names round-trip") {
    for (auto m : {WeightingMode::binary, WeightingMode::raw_count, WeightingMode::normalized_tf, WeightingMode::tfidf})
      CHECK(parse_weighting(to_string(m)) == m);
    CHECK_THROWS_AS(parse_weighting("bm25"), InvalidArgument);
  }

  TEST_CASE("vector invariants on random corpora") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 50; ++trial) {
      auto corpus = testing::random_corpus(rng, 1 + rng() % 30, 2 + rng() % 20, {"x"});
      auto vocab = Vocabulary::build(corpus.docs);
      for (TokenId id = 0; id < vocab.size(); ++id) {
        CHECK(vocab.document_frequency(id) >= 1);
        CHECK(vocab.document_frequency(id) <= vocab.total_documents());
        CHECK(vocab.find(vocab.token(id)) == id);
      }
      TokenStream probe = corpus.docs[0];
      probe.push_back("never-seen");
      for (auto m : {WeightingMode::binary, WeightingMode::raw_count, WeightingMode::normalized_tf, WeightingMode::tfidf}) {
        auto v = vectorize(probe, vocab, m);
        CHECK(v.doc_length == probe.size());
        double sum = 0.0;
        for (const auto& [id, x] : v.entries) {
          CHECK(x > 0.0);
          sum += x;
        }
        if (m == WeightingMode::raw_count) CHECK(sum <= static_cast<double>(v.doc_length));
      }
    }
  }

  TEST_CASE("weighting invariants on random corpora") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 100; ++trial) {
      auto corpus = testing::random_corpus(rng, 1 + rng() % 20, 2 + rng() % 10, {"x"});
      auto vocab = Vocabulary::build(corpus.docs);
      TokenStream probe = corpus.docs[rng() % corpus.docs.size()];
      const bool add_oov = rng() % 2;
      if (add_oov) probe.push_back("oov");

      const auto tf = vectorize(probe, vocab, WeightingMode::normalized_tf);
      double sum = 0.0;
      for (const auto& [id, x] : tf.entries) sum += x;
      if (add_oov) {
        CHECK(sum < 1.0);
      } else {
        CHECK(std::abs(sum - 1.0) < 1e-12);
      }

      const auto raw = vectorize(probe, vocab, WeightingMode::raw_count);
      auto ones = raw;
      for (auto& [id, x] : ones.entries) x = 1.0;
      CHECK(vectorize(probe, vocab, WeightingMode::binary) == ones);

      TokenStream shuffled = probe;
      std::shuffle(shuffled.begin(), shuffled.end(), rng);
      for (auto m : {WeightingMode::binary, WeightingMode::raw_count, WeightingMode::normalized_tf, WeightingMode::tfidf})
        CHECK(vectorize(shuffled, vocab, m) == vectorize(probe, vocab, m));

      for (TokenId a = 0; a < vocab.size(); ++a) {
        CHECK(idf(vocab, a) >= 0.0);
        for (TokenId b = 0; b < vocab.size(); ++b)
          if (vocab.document_frequency(a) < vocab.document_frequency(b)) CHECK(idf(vocab, a) > idf(vocab, b));
      }
    }
  }
}
