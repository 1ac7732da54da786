#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "nbayes/error.hpp"
#include "nbayes/models.hpp"
#include "support/oracles.hpp"

using namespace nbayes;

namespace {

constexpr double kTol = 1e-12;

CategoricalModel toy_model(double alpha = 0.0) {
  const auto toy = testing::toy_shapes();
  return fit_categorical(toy.samples, toy.labels, alpha);
}

SparseVector counts(std::initializer_list<std::pair<const TokenId, double>> e) {
  SparseVector v;
  v.entries = e;
  for (const auto& [id, x] : v.entries) v.doc_length += static_cast<std::size_t>(x);
  return v;
}

}  // namespace

TEST_SUITE("models") {
  TEST_CASE("priors") {
    const auto toy = testing::toy_shapes();
    auto p = ClassPriors::fit(toy.labels);
    CHECK(p.labels() == std::vector<Label>{"+", "-"});
    CHECK(std::abs(p.probability(0) - 7.0 / 12.0) < kTol);
    CHECK(std::abs(p.probability(1) - 5.0 / 12.0) < kTol);

    std::vector<Label> one = {"s", "s"};
    CHECK(ClassPriors::fit(one).probability(0) == 1.0);

    std::vector<Label> sms = {"spam", "ham", "ham", "ham"};
    auto q = ClassPriors::fit(sms);
    CHECK(q.probability(*q.index_of("spam")) == 0.25);
    CHECK(q.probability(*q.index_of("ham")) == 0.75);
    CHECK(q.total() == 4);

    std::vector<Label> none;
    CHECK_THROWS_AS(ClassPriors::fit(none), InvalidArgument);
  }

  TEST_CASE("prior overrides are validated") {
    auto p = ClassPriors::from_counts({"a", "b"}, {3, 1});
    auto u = p.with_probabilities({0.5, 0.5});
    CHECK(u.overridden());
    CHECK(u.counts() == p.counts());
    CHECK_THROWS_AS(p.with_probabilities({0.7, 0.7}), InvalidArgument);
    CHECK_THROWS_AS(p.with_probabilities({1.0, 0.0}), InvalidArgument);
    CHECK_THROWS_AS(p.with_probabilities({1.0}), InvalidArgument);
    CHECK_THROWS_AS(ClassPriors::from_counts({"a", "a"}, {1, 1}), InvalidArgument);
    CHECK_THROWS_AS(ClassPriors::from_counts({"a"}, {0}), InvalidArgument);
  }

  TEST_CASE("categorical conditionals on the toy data") {
    auto m = toy_model();
    CHECK(std::abs(m.conditional(0, 0, "blue") - 3.0 / 7.0) < kTol);
    CHECK(std::abs(m.conditional(1, 0, "square") - 5.0 / 7.0) < kTol);
    CHECK(std::abs(m.conditional(0, 1, "blue") - 3.0 / 5.0) < kTol);
    CHECK(std::abs(m.conditional(1, 1, "square") - 3.0 / 5.0) < kTol);
    CHECK(m.conditional(0, 0, "yellow") == 0.0);
    CHECK(m.conditional(0, 1, "yellow") == 0.0);
    CHECK(std::abs(m.log_likelihood({"blue", "square"}, 0) - std::log(15.0 / 49.0)) < kTol);
    CHECK(m.log_likelihood({"yellow", "square"}, 0) == -std::numeric_limits<double>::infinity());
  }

  TEST_CASE("categorical additive smoothing") {
    std::vector<CategoricalSample> s = {{"a"}, {"a"}, {"b"}};
    std::vector<Label> l = {"c", "c", "c"};
    auto m = fit_categorical(s, l, 1.0);
    CHECK(m.distinct_values(0) == 2);
    CHECK(std::abs(m.conditional(0, 0, "a") - 0.6) < kTol);
    CHECK(std::abs(m.conditional(0, 0, "b") - 0.4) < kTol);
    CHECK(std::abs(m.conditional(0, 0, "z") - 1.0 / 6.0) < kTol);
    CHECK_THROWS_AS(fit_categorical(s, l, -1.0), InvalidArgument);
  }

  TEST_CASE("categorical conditionals sum to one over known values") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
      const std::size_t n = 2 + rng() % 20;
      std::vector<CategoricalSample> s;
      std::vector<Label> l;
      for (std::size_t i = 0; i < n; ++i) {
        s.push_back({"v" + std::to_string(rng() % 5), "u" + std::to_string(rng() % 3)});
        l.push_back(i < 2 ? std::string(1, static_cast<char>('a' + i)) : std::string(1, static_cast<char>('a' + rng() % 3)));
      }
      const double alpha = std::array{0.1, 0.5, 1.0, 2.0}[rng() % 4];
      auto m = fit_categorical(s, l, alpha);
      for (std::size_t pos = 0; pos < m.dimensions(); ++pos)
        for (std::size_t c = 0; c < m.priors().size(); ++c) {
          double sum = 0.0;
          for (const auto& v : m.positions()[pos].values) {
            CHECK(m.conditional(pos, c, v) > 0.0);
            sum += m.conditional(pos, c, v);
          }
          CHECK(std::abs(sum - 1.0) < 1e-9);
        }
    }
  }

  TEST_CASE("bernoulli estimates") {
    BernoulliModel m(ClassPriors::from_counts({"c"}, {3}), {{2, 0, 3}}, {3});
    CHECK(std::abs(m.estimate(0, 0) - 0.6) < kTol);
    CHECK(std::abs(m.estimate(0, 1) - 1.0 / 5.0) < kTol);
    CHECK(std::abs(m.estimate(0, 2) - 4.0 / 5.0) < kTol);
  }

  TEST_CASE("bernoulli log-likelihood sums present and absent bits") {
    BernoulliModel m(ClassPriors::from_counts({"c"}, {3}), {{2}}, {3});
    CHECK(std::abs(m.log_likelihood(counts({{0, 1.0}}), 0) - std::log(0.6)) < kTol);
    CHECK(std::abs(m.log_likelihood(SparseVector{}, 0) - std::log(0.4)) < kTol);
  }

  TEST_CASE("bernoulli fit rejects non-binary vectors") {
    Vocabulary vocab({"x"}, {1}, 1);
    std::vector<SparseVector> v = {counts({{0, 2.0}})};
    std::vector<Label> l = {"c"};
    CHECK_THROWS_AS(fit_bernoulli(v, l, vocab), InvalidArgument);
  }

  TEST_CASE("multinomial conditionals") {
    Vocabulary vocab({"x", "y", "z"}, {1, 1, 1}, 2);
    std::vector<SparseVector> v = {counts({{0, 5.0}, {1, 3.0}}), counts({{2, 1.0}})};
    std::vector<Label> l = {"c", "d"};
    auto m = fit_multinomial(v, l, vocab, 1.0);
    CHECK(std::abs(m.conditional(0, 0) - 6.0 / 11.0) < kTol);
    CHECK(std::abs(m.conditional(0, 1) - 4.0 / 11.0) < kTol);
    CHECK(std::abs(m.conditional(0, 2) - 1.0 / 11.0) < kTol);
    CHECK(std::abs(m.conditional(0, 0) + m.conditional(0, 1) + m.conditional(0, 2) - 1.0) < 1e-9);

    auto unsmoothed = fit_multinomial(v, l, vocab, 0.0);
    CHECK(unsmoothed.conditional(0, 2) == 0.0);
    CHECK(unsmoothed.log_conditional(0, 2) == -std::numeric_limits<double>::infinity());
  }

  TEST_CASE("multinomial likelihood of hello world") {
    MultinomialModel m(ClassPriors::from_counts({"spam"}, {1}), {{20, 2, 78}}, {100}, 0.0);
    const double likelihood = std::exp(m.log_likelihood(counts({{0, 1.0}, {1, 1.0}}), 0));
    CHECK(std::abs(likelihood - 0.004) < kTol);
    CHECK(m.log_likelihood(SparseVector{}, 0) == 0.0);
  }

  TEST_CASE("gaussian parameters and density") {
    std::vector<RealVector> rows = {{4.0}, {6.0}, {3.0}, {3.0}};
    std::vector<Label> l = {"a", "a", "b", "b"};
    auto m = fit_gaussian(rows, l);
    CHECK(m.mean(0, 0) == 5.0);
    CHECK(m.sigma(0, 0) == 1.0);
    CHECK(m.sigma(1, 0) == GaussianModel::kMinSigma);
    CHECK(std::isfinite(m.log_likelihood({3.0}, 1)));
    CHECK(std::isfinite(GaussianModel::density(3.0, 3.0, GaussianModel::kMinSigma)));
    CHECK(std::abs(GaussianModel::density(5.0, 5.0, 1.0) - 1.0 / std::sqrt(2.0 * std::numbers::pi)) < kTol);
    CHECK(GaussianModel::density(5.0, 5.0, 1.0) == doctest::Approx(0.39894).epsilon(1e-5));
    CHECK(std::abs(GaussianModel::log_density(1.3, 0.2, 2.5) - std::log(testing::normal_pdf(1.3, 0.2, 2.5))) < kTol);

    std::vector<RealVector> single = {{1.0}, {2.0}, {3.0}};
    std::vector<Label> ls = {"a", "a", "b"};
    CHECK_THROWS_AS(fit_gaussian(single, ls), InvalidArgument);
  }

  TEST_CASE("posterior scores on the toy data") {
    NaiveBayesModel m = toy_model();
    auto r = posterior_scores(m, CategoricalSample{"blue", "square"});
    CHECK(std::abs(std::exp(r.log_scores[0]) - 5.0 / 28.0) < kTol);
    CHECK(std::abs(std::exp(r.log_scores[1]) - 3.0 / 20.0) < kTol);
    CHECK(std::abs(r.posteriors[0] - 25.0 / 46.0) < kTol);
    CHECK(r.posteriors[0] == doctest::Approx(0.5435).epsilon(1e-4));
    CHECK(r.predicted_label() == "+");
    CHECK_FALSE(r.degenerate_evidence);
  }

  TEST_CASE("uniform priors flip the toy decision") {
    NaiveBayesModel m = with_priors(toy_model(), {0.5, 0.5});
    CHECK(classify(m, CategoricalSample{"blue", "square"}) == "-");
  }

  TEST_CASE("identical likelihoods leave the priors") {
    std::vector<CategoricalSample> s = {{"x"}, {"x"}};
    std::vector<Label> l = {"a", "b"};
    NaiveBayesModel m = with_priors(fit_categorical(s, l, 1.0), {0.9, 0.1});
    auto r = posterior_scores(m, CategoricalSample{"x"});
    CHECK(std::abs(r.posteriors[0] - 0.9) < kTol);
    CHECK(std::abs(r.posteriors[1] - 0.1) < kTol);
  }

  TEST_CASE("exact ties go to the smaller label, then the larger prior wins") {
    std::vector<CategoricalSample> s = {{"x"}, {"x"}};
    std::vector<Label> l = {"b", "a"};
    CHECK(classify(fit_categorical(s, l, 1.0), CategoricalSample{"x"}) == "a");

    std::vector<CategoricalSample> s3 = {{"x"}, {"x"}, {"x"}};
    std::vector<Label> l3 = {"a", "b", "b"};
    auto r = posterior_scores(fit_categorical(s3, l3, 0.0), CategoricalSample{"yellow"});
    CHECK(r.degenerate_evidence);
    CHECK(r.posteriors == std::vector<double>{0.5, 0.5});
    CHECK(r.predicted_label() == "b");
  }

  TEST_CASE("unseen value with alpha zero is degenerate") {
    auto r = posterior_scores(toy_model(), CategoricalSample{"yellow", "square"});
    CHECK(r.degenerate_evidence);
    CHECK(r.log_scores[0] == -std::numeric_limits<double>::infinity());
    CHECK(r.log_scores[1] == -std::numeric_limits<double>::infinity());
    CHECK(r.predicted_label() == "+");
  }

  TEST_CASE("text input with no known tokens falls back to the priors") {
    Vocabulary vocab({"x", "y"}, {1, 1}, 4);
    std::vector<SparseVector> v = {counts({{0, 1.0}}), counts({{1, 1.0}}), counts({{1, 1.0}}), counts({{1, 1.0}})};
    std::vector<Label> l = {"a", "b", "b", "b"};
    for (NaiveBayesModel m : {NaiveBayesModel(fit_bernoulli(v, l, vocab)), NaiveBayesModel(fit_multinomial(v, l, vocab, 1.0))}) {
      auto r = posterior_scores(m, SparseVector{});
      CHECK(r.degenerate_evidence);
      CHECK(r.predicted_label() == "b");
      CHECK(std::abs(r.posteriors[1] - 0.75) < kTol);
    }
  }

  TEST_CASE("long documents score in log space without underflow") {
    Vocabulary vocab({"x", "y"}, {2, 2}, 4);
    std::vector<SparseVector> v = {counts({{0, 3.0}, {1, 1.0}}), counts({{0, 1.0}, {1, 3.0}})};
    std::vector<Label> l = {"a", "b"};
    NaiveBayesModel m = fit_multinomial(v, l, vocab, 1.0);
    SparseVector doc = counts({{0, 5000.0}, {1, 4000.0}});
    auto r = posterior_scores(m, doc);
    CHECK(std::isfinite(r.log_scores[0]));
    CHECK(r.log_scores[0] < -5000.0);
    CHECK(r.predicted_label() == "a");
    CHECK(std::abs(r.posteriors[0] + r.posteriors[1] - 1.0) < 1e-9);
  }

  TEST_CASE("mismatched input kinds are rejected") {
    NaiveBayesModel m = toy_model();
    CHECK_THROWS_AS(classify(m, RealVector{1.0, 2.0}), InvalidArgument);
    CHECK_THROWS_AS(classify(m, CategoricalSample{"blue"}), InvalidArgument);
  }

  TEST_CASE("variant names round-trip") {
    for (auto v : {ModelVariant::categorical, ModelVariant::bernoulli, ModelVariant::multinomial, ModelVariant::gaussian})
      CHECK(parse_variant(to_string(v)) == v);
    CHECK_THROWS_AS(parse_variant("svm"), InvalidArgument);
    CHECK(variant_of(NaiveBayesModel(toy_model())) == ModelVariant::categorical);
  }

  TEST_CASE("posterior report invariants and training-order invariance") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 100; ++trial) {
      auto corpus = testing::random_corpus(rng, 2 + rng() % 15, 3 + rng() % 25, {"a", "b", "c"});
      auto vocab = Vocabulary::build(corpus.docs);
      std::vector<SparseVector> vecs;
      for (const auto& d : corpus.docs) vecs.push_back(vectorize(d, vocab, WeightingMode::raw_count));
      NaiveBayesModel m = fit_multinomial(vecs, corpus.labels, vocab, 0.5);

      std::vector<std::size_t> order(vecs.size());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      std::shuffle(order.begin(), order.end(), rng);
      std::vector<SparseVector> pv;
      std::vector<Label> pl;
      for (auto i : order) {
        pv.push_back(vecs[i]);
        pl.push_back(corpus.labels[i]);
      }
      NaiveBayesModel shuffled = fit_multinomial(pv, pl, vocab, 0.5);

      for (const auto& probe : vecs) {
        auto r = posterior_scores(m, probe);
        double sum = 0.0;
        for (double p : r.posteriors) sum += p;
        CHECK(std::abs(sum - 1.0) < 1e-9);
        CHECK(r.log_scores[r.predicted] == *std::max_element(r.log_scores.begin(), r.log_scores.end()));
        CHECK(posterior_scores(shuffled, probe).log_scores == r.log_scores);
      }
    }
  }
}
