#pragma once

// Naive Bayes family: class priors plus categorical, multi-variate Bernoulli,
// multinomial and Gaussian class-conditional models.
//
// Models keep raw counts / sufficient statistics; smoothed conditionals and
// their logarithms are derived at construction. All scoring is done in log
// space, and a conditional of exactly 0 contributes -infinity.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "nbayes/vectorizer.hpp"

namespace nbayes {

using Label = std::string;
using CategoricalSample = std::vector<std::string>;
using RealVector = std::vector<double>;

/// P(class) estimated as N_class / N_total, labels kept in ascending order.
/// The probabilities can be overridden (e.g. forced uniform) while the counts
/// are retained.
class ClassPriors {
 public:
  ClassPriors() = default;

  /// Throws InvalidArgument on an empty label list.
  static ClassPriors fit(std::span<const Label> labels);
  /// labels must be distinct and every count at least 1.
  static ClassPriors from_counts(std::vector<Label> labels, std::vector<std::uint64_t> counts);

  /// Same labels and counts, different P(class). Each probability must lie in
  /// (0, 1] and they must sum to 1 within 1e-12.
  ClassPriors with_probabilities(std::vector<double> probabilities) const;

  std::size_t size() const noexcept { return labels_.size(); }
  const std::vector<Label>& labels() const noexcept { return labels_; }
  const Label& label(std::size_t j) const { return labels_.at(j); }
  std::uint64_t count(std::size_t j) const { return counts_.at(j); }
  const std::vector<std::uint64_t>& counts() const noexcept { return counts_; }
  std::uint64_t total() const noexcept { return total_; }
  double probability(std::size_t j) const { return probabilities_.at(j); }
  const std::vector<double>& probabilities() const noexcept { return probabilities_; }
  bool overridden() const noexcept { return overridden_; }
  std::optional<std::size_t> index_of(std::string_view label) const;

 private:
  std::vector<Label> labels_;
  std::vector<std::uint64_t> counts_;
  std::vector<double> probabilities_;
  std::uint64_t total_ = 0;
  bool overridden_ = false;
};

/// Per-position value tables for categorical (feature-tuple) data.
///
/// conditional = (N_{v,class} + alpha) / (N_class + alpha * K), where K is the
/// number of distinct training values at that position, plus one when the
/// queried value was never seen there.
class CategoricalModel {
 public:
  struct Position {
    std::vector<std::string> values;                 // first-appearance order
    std::vector<std::vector<std::uint64_t>> counts;  // [class][value]
  };

  CategoricalModel(ClassPriors priors, std::vector<Position> positions, std::vector<std::uint64_t> class_totals,
                   double alpha);

  const ClassPriors& priors() const noexcept { return priors_; }
  void set_priors(ClassPriors priors);

  std::size_t dimensions() const noexcept { return positions_.size(); }
  double alpha() const noexcept { return alpha_; }
  const std::vector<Position>& positions() const noexcept { return positions_; }
  const std::vector<std::uint64_t>& class_totals() const noexcept { return class_totals_; }
  std::size_t distinct_values(std::size_t position) const { return positions_.at(position).values.size(); }

  std::uint64_t count(std::size_t position, std::size_t cls, std::string_view value) const;
  double conditional(std::size_t position, std::size_t cls, std::string_view value) const;
  double log_likelihood(const CategoricalSample& sample, std::size_t cls) const;

 private:
  ClassPriors priors_;
  std::vector<Position> positions_;
  std::vector<std::unordered_map<std::string, std::size_t>> value_index_;
  std::vector<std::uint64_t> class_totals_;
  double alpha_;
};

/// Multi-variate Bernoulli over vocabulary presence bits:
/// P(x_i | class) = (df_{i,class} + 1) / (df_class + 2).
class BernoulliModel {
 public:
  BernoulliModel(ClassPriors priors, std::vector<std::vector<std::uint64_t>> document_counts,
                 std::vector<std::uint64_t> class_documents);

  const ClassPriors& priors() const noexcept { return priors_; }
  void set_priors(ClassPriors priors);

  std::size_t vocabulary_size() const noexcept { return vocabulary_size_; }
  const std::vector<std::vector<std::uint64_t>>& document_counts() const noexcept { return document_counts_; }
  const std::vector<std::uint64_t>& class_documents() const noexcept { return class_documents_; }

  double estimate(std::size_t cls, TokenId id) const;
  /// Sums over every vocabulary id, present or not. Any positive value counts
  /// as present.
  double log_likelihood(const SparseVector& doc, std::size_t cls) const;

 private:
  ClassPriors priors_;
  std::vector<std::vector<std::uint64_t>> document_counts_;  // [class][id]
  std::vector<std::uint64_t> class_documents_;
  std::size_t vocabulary_size_ = 0;
  std::vector<std::vector<double>> log_present_;  // log p - log(1 - p)
  std::vector<double> log_all_absent_;            // sum over ids of log(1 - p)
};

/// Multinomial over term frequencies:
/// P(x_i | class) = (sum tf_{i,class} + alpha) / (sum tf_class + alpha * V).
/// Fractional (normalized-tf or tf-idf) "counts" are accepted unchanged.
class MultinomialModel {
 public:
  MultinomialModel(ClassPriors priors, std::vector<std::vector<double>> term_sums, std::vector<double> class_totals,
                   double alpha);

  const ClassPriors& priors() const noexcept { return priors_; }
  void set_priors(ClassPriors priors);

  std::size_t vocabulary_size() const noexcept { return vocabulary_size_; }
  double alpha() const noexcept { return alpha_; }
  const std::vector<std::vector<double>>& term_sums() const noexcept { return term_sums_; }
  const std::vector<double>& class_totals() const noexcept { return class_totals_; }

  double conditional(std::size_t cls, TokenId id) const;
  double log_conditional(std::size_t cls, TokenId id) const { return log_conditional_.at(cls).at(id); }
  /// sum over stored entries of value * log P(id | class); 0 for an empty vector.
  double log_likelihood(const SparseVector& doc, std::size_t cls) const;

 private:
  ClassPriors priors_;
  std::vector<std::vector<double>> term_sums_;  // [class][id]
  std::vector<double> class_totals_;
  double alpha_;
  std::size_t vocabulary_size_ = 0;
  std::vector<std::vector<double>> log_conditional_;
};

/// Per-class normal densities. Stores the class mean and the sum of squared
/// deviations (m2); sigma is the population standard deviation sqrt(m2 / n),
/// floored at kMinSigma.
class GaussianModel {
 public:
  static constexpr double kMinSigma = 1e-9;

  GaussianModel(ClassPriors priors, std::vector<std::vector<double>> means, std::vector<std::vector<double>> m2);

  const ClassPriors& priors() const noexcept { return priors_; }
  void set_priors(ClassPriors priors);

  std::size_t dimensions() const noexcept { return dimensions_; }
  const std::vector<std::vector<double>>& means() const noexcept { return means_; }
  const std::vector<std::vector<double>>& m2() const noexcept { return m2_; }
  double mean(std::size_t cls, std::size_t feature) const { return means_.at(cls).at(feature); }
  double sigma(std::size_t cls, std::size_t feature) const { return sigmas_.at(cls).at(feature); }

  double log_likelihood(const RealVector& x, std::size_t cls) const;

  static double density(double x, double mean, double sigma);
  static double log_density(double x, double mean, double sigma);

 private:
  ClassPriors priors_;
  std::vector<std::vector<double>> means_;
  std::vector<std::vector<double>> m2_;
  std::vector<std::vector<double>> sigmas_;
  std::size_t dimensions_ = 0;
};

CategoricalModel fit_categorical(std::span<const CategoricalSample> samples, std::span<const Label> labels,
                                 double alpha);
BernoulliModel fit_bernoulli(std::span<const SparseVector> binary_vectors, std::span<const Label> labels,
                             const Vocabulary& vocab);
MultinomialModel fit_multinomial(std::span<const SparseVector> count_vectors, std::span<const Label> labels,
                                 const Vocabulary& vocab, double alpha);
/// Every class needs at least two rows.
GaussianModel fit_gaussian(std::span<const RealVector> rows, std::span<const Label> labels);

using NaiveBayesModel = std::variant<CategoricalModel, BernoulliModel, MultinomialModel, GaussianModel>;
using ModelInput = std::variant<SparseVector, CategoricalSample, RealVector>;

enum class ModelVariant { categorical, bernoulli, multinomial, gaussian };

std::string_view to_string(ModelVariant variant);
/// Throws InvalidArgument on an unknown name.
ModelVariant parse_variant(std::string_view name);
ModelVariant variant_of(const NaiveBayesModel& model);

const ClassPriors& priors_of(const NaiveBayesModel& model);
/// Copy of the model with P(class) replaced, e.g. forced uniform.
NaiveBayesModel with_priors(NaiveBayesModel model, std::vector<double> probabilities);

/// log P(input | class). Throws InvalidArgument when the input kind does not
/// match the model variant.
double log_likelihood(const NaiveBayesModel& model, const ModelInput& input, std::size_t cls);

struct PosteriorReport {
  std::vector<Label> labels;
  /// log P(class) + log P(input | class)
  std::vector<double> log_scores;
  /// log-scores normalized by the evidence; uniform when degenerate
  std::vector<double> posteriors;
  std::size_t predicted = 0;
  /// Set when every log-score is -infinity, or when a text input has no
  /// in-vocabulary token. Either way the decision rests on the priors alone.
  bool degenerate_evidence = false;

  const Label& predicted_label() const { return labels.at(predicted); }
};

/// Decision rule: maximal log-score; exact ties go to the larger prior, then
/// the lexicographically smaller label.
PosteriorReport posterior_scores(const NaiveBayesModel& model, const ModelInput& input);
Label classify(const NaiveBayesModel& model, const ModelInput& input);

}  // namespace nbayes
