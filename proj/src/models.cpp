#include "nbayes/models.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

#include "nbayes/error.hpp"

namespace nbayes {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double safe_log(double p) { return p > 0.0 ? std::log(p) : kNegInf; }

void check_alpha(double alpha) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw InvalidArgument("smoothing alpha must be a finite value >= 0");
}

void check_same_labels(const ClassPriors& current, const ClassPriors& replacement) {
  if (current.labels() != replacement.labels()) throw InvalidArgument("replacement priors cover different classes");
}

// Maps each training label onto its index in the (sorted) prior label list.
std::vector<std::size_t> class_indices(const ClassPriors& priors, std::span<const Label> labels) {
  std::vector<std::size_t> idx;
  idx.reserve(labels.size());
  for (const auto& label : labels) idx.push_back(*priors.index_of(label));
  return idx;
}

void check_sizes(std::size_t samples, std::size_t labels) {
  if (samples != labels) throw InvalidArgument("sample and label counts differ");
  if (samples == 0) throw InvalidArgument("cannot fit a model on an empty training set");
}

void check_class(const ClassPriors& priors, std::size_t cls) {
  if (cls >= priors.size()) throw InvalidArgument("class index " + std::to_string(cls) + " out of range");
}

void check_vector_ids(const SparseVector& v, std::size_t vocabulary_size) {
  if (!v.entries.empty() && v.entries.rbegin()->first >= vocabulary_size) {
    throw InvalidArgument("sparse vector refers to a token id outside the vocabulary");
  }
}

}  // namespace

// ---------------------------------------------------------------- categorical

CategoricalModel::CategoricalModel(ClassPriors priors, std::vector<Position> positions,
                                   std::vector<std::uint64_t> class_totals, double alpha)
    : priors_(std::move(priors)),
      positions_(std::move(positions)),
      class_totals_(std::move(class_totals)),
      alpha_(alpha) {
  check_alpha(alpha_);
  const std::size_t classes = priors_.size();
  if (class_totals_.size() != classes) throw InvalidArgument("categorical class totals do not match the classes");
  for (std::uint64_t n : class_totals_) {
    if (n == 0) throw InvalidArgument("categorical class total must be positive");
  }
  value_index_.resize(positions_.size());
  for (std::size_t i = 0; i < positions_.size(); ++i) {
    const Position& pos = positions_[i];
    if (pos.counts.size() != classes) throw InvalidArgument("categorical count table has wrong class count");
    for (std::size_t v = 0; v < pos.values.size(); ++v) {
      if (!value_index_[i].emplace(pos.values[v], v).second) {
        throw InvalidArgument("duplicate categorical value '" + pos.values[v] + "'");
      }
    }
    for (std::size_t j = 0; j < classes; ++j) {
      if (pos.counts[j].size() != pos.values.size()) throw InvalidArgument("categorical count row has wrong width");
      std::uint64_t sum = 0;
      for (std::uint64_t c : pos.counts[j]) sum += c;
      if (sum != class_totals_[j]) throw InvalidArgument("categorical counts do not add up to the class total");
    }
  }
}

void CategoricalModel::set_priors(ClassPriors priors) {
  check_same_labels(priors_, priors);
  priors_ = std::move(priors);
}

std::uint64_t CategoricalModel::count(std::size_t position, std::size_t cls, std::string_view value) const {
  check_class(priors_, cls);
  const auto& index = value_index_.at(position);
  auto it = index.find(std::string(value));
  return it == index.end() ? 0 : positions_[position].counts[cls][it->second];
}

double CategoricalModel::conditional(std::size_t position, std::size_t cls, std::string_view value) const {
  check_class(priors_, cls);
  const auto& index = value_index_.at(position);
  auto it = index.find(std::string(value));
  const bool seen = it != index.end();
  const double n_value = seen ? static_cast<double>(positions_[position].counts[cls][it->second]) : 0.0;
  const double k = static_cast<double>(positions_[position].values.size() + (seen ? 0 : 1));
  return (n_value + alpha_) / (static_cast<double>(class_totals_[cls]) + alpha_ * k);
}

double CategoricalModel::log_likelihood(const CategoricalSample& sample, std::size_t cls) const {
  if (sample.size() != positions_.size()) {
    throw InvalidArgument("categorical sample has " + std::to_string(sample.size()) + " values, model expects " +
                          std::to_string(positions_.size()));
  }
  double total = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) total += safe_log(conditional(i, cls, sample[i]));
  return total;
}

CategoricalModel fit_categorical(std::span<const CategoricalSample> samples, std::span<const Label> labels,
                                 double alpha) {
  check_alpha(alpha);
  check_sizes(samples.size(), labels.size());
  const std::size_t d = samples.front().size();
  for (const auto& s : samples) {
    if (s.size() != d) throw InvalidArgument("categorical samples have inconsistent arity");
  }

  ClassPriors priors = ClassPriors::fit(labels);
  const std::vector<std::size_t> cls = class_indices(priors, labels);

  std::vector<CategoricalModel::Position> positions(d);
  for (std::size_t i = 0; i < d; ++i) {
    auto& pos = positions[i];
    pos.counts.assign(priors.size(), {});
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t s = 0; s < samples.size(); ++s) {
      auto [it, inserted] = index.try_emplace(samples[s][i], pos.values.size());
      if (inserted) {
        pos.values.push_back(samples[s][i]);
        for (auto& row : pos.counts) row.push_back(0);
      }
      ++pos.counts[cls[s]][it->second];
    }
  }
  return CategoricalModel(priors, std::move(positions), priors.counts(), alpha);
}

// ------------------------------------------------------------------ bernoulli

BernoulliModel::BernoulliModel(ClassPriors priors, std::vector<std::vector<std::uint64_t>> document_counts,
                               std::vector<std::uint64_t> class_documents)
    : priors_(std::move(priors)),
      document_counts_(std::move(document_counts)),
      class_documents_(std::move(class_documents)) {
  const std::size_t classes = priors_.size();
  if (document_counts_.size() != classes || class_documents_.size() != classes) {
    throw InvalidArgument("bernoulli tables do not match the classes");
  }
  vocabulary_size_ = document_counts_.front().size();
  log_present_.resize(classes);
  log_all_absent_.assign(classes, 0.0);
  for (std::size_t j = 0; j < classes; ++j) {
    if (document_counts_[j].size() != vocabulary_size_) throw InvalidArgument("bernoulli count rows differ in width");
    log_present_[j].resize(vocabulary_size_);
    for (std::size_t i = 0; i < vocabulary_size_; ++i) {
      if (document_counts_[j][i] > class_documents_[j]) {
        throw InvalidArgument("bernoulli document count exceeds the class document count");
      }
      const double p = estimate(j, static_cast<TokenId>(i));
      const double log_absent = std::log1p(-p);
      log_present_[j][i] = std::log(p) - log_absent;
      log_all_absent_[j] += log_absent;
    }
  }
}

void BernoulliModel::set_priors(ClassPriors priors) {
  check_same_labels(priors_, priors);
  priors_ = std::move(priors);
}

double BernoulliModel::estimate(std::size_t cls, TokenId id) const {
  check_class(priors_, cls);
  return (static_cast<double>(document_counts_[cls].at(id)) + 1.0) /
         (static_cast<double>(class_documents_[cls]) + 2.0);
}

double BernoulliModel::log_likelihood(const SparseVector& doc, std::size_t cls) const {
  check_class(priors_, cls);
  check_vector_ids(doc, vocabulary_size_);
  double total = log_all_absent_[cls];
  for (const auto& [id, value] : doc.entries) {
    if (value > 0.0) total += log_present_[cls][id];
  }
  return total;
}

BernoulliModel fit_bernoulli(std::span<const SparseVector> binary_vectors, std::span<const Label> labels,
                             const Vocabulary& vocab) {
  check_sizes(binary_vectors.size(), labels.size());
  ClassPriors priors = ClassPriors::fit(labels);
  const std::vector<std::size_t> cls = class_indices(priors, labels);

  std::vector<std::vector<std::uint64_t>> df(priors.size(), std::vector<std::uint64_t>(vocab.size(), 0));
  for (std::size_t d = 0; d < binary_vectors.size(); ++d) {
    check_vector_ids(binary_vectors[d], vocab.size());
    for (const auto& [id, value] : binary_vectors[d].entries) {
      if (value != 1.0) throw InvalidArgument("bernoulli training vectors must be binary");
      ++df[cls[d]][id];
    }
  }
  return BernoulliModel(priors, std::move(df), priors.counts());
}

// ---------------------------------------------------------------- multinomial

MultinomialModel::MultinomialModel(ClassPriors priors, std::vector<std::vector<double>> term_sums,
                                   std::vector<double> class_totals, double alpha)
    : priors_(std::move(priors)), term_sums_(std::move(term_sums)), class_totals_(std::move(class_totals)), alpha_(alpha) {
  check_alpha(alpha_);
  const std::size_t classes = priors_.size();
  if (term_sums_.size() != classes || class_totals_.size() != classes) {
    throw InvalidArgument("multinomial tables do not match the classes");
  }
  vocabulary_size_ = term_sums_.front().size();
  log_conditional_.resize(classes);
  for (std::size_t j = 0; j < classes; ++j) {
    if (term_sums_[j].size() != vocabulary_size_) throw InvalidArgument("multinomial sum rows differ in width");
    if (!(class_totals_[j] >= 0.0) || !std::isfinite(class_totals_[j])) {
      throw InvalidArgument("multinomial class totals must be finite and non-negative");
    }
    log_conditional_[j].resize(vocabulary_size_);
    for (std::size_t i = 0; i < vocabulary_size_; ++i) {
      if (!(term_sums_[j][i] >= 0.0) || !std::isfinite(term_sums_[j][i])) {
        throw InvalidArgument("multinomial term sums must be finite and non-negative");
      }
      log_conditional_[j][i] = safe_log(conditional(j, static_cast<TokenId>(i)));
    }
  }
}

void MultinomialModel::set_priors(ClassPriors priors) {
  check_same_labels(priors_, priors);
  priors_ = std::move(priors);
}

double MultinomialModel::conditional(std::size_t cls, TokenId id) const {
  check_class(priors_, cls);
  const double denom = class_totals_[cls] + alpha_ * static_cast<double>(vocabulary_size_);
  // alpha = 0 with a class that saw no in-vocabulary tokens: nothing is
  // observable in that class.
  if (denom == 0.0) return 0.0;
  return (term_sums_[cls].at(id) + alpha_) / denom;
}

double MultinomialModel::log_likelihood(const SparseVector& doc, std::size_t cls) const {
  check_class(priors_, cls);
  check_vector_ids(doc, vocabulary_size_);
  double total = 0.0;
  for (const auto& [id, value] : doc.entries) total += value * log_conditional_[cls][id];
  return total;
}

MultinomialModel fit_multinomial(std::span<const SparseVector> count_vectors, std::span<const Label> labels,
                                 const Vocabulary& vocab, double alpha) {
  check_alpha(alpha);
  check_sizes(count_vectors.size(), labels.size());
  ClassPriors priors = ClassPriors::fit(labels);
  const std::vector<std::size_t> cls = class_indices(priors, labels);

  std::vector<std::vector<double>> sums(priors.size(), std::vector<double>(vocab.size(), 0.0));
  std::vector<double> totals(priors.size(), 0.0);
  for (std::size_t d = 0; d < count_vectors.size(); ++d) {
    check_vector_ids(count_vectors[d], vocab.size());
    for (const auto& [id, value] : count_vectors[d].entries) {
      if (!(value >= 0.0) || !std::isfinite(value)) throw InvalidArgument("term frequencies must be non-negative");
      sums[cls[d]][id] += value;
      totals[cls[d]] += value;
    }
  }
  return MultinomialModel(std::move(priors), std::move(sums), std::move(totals), alpha);
}

// ------------------------------------------------------------------- gaussian

GaussianModel::GaussianModel(ClassPriors priors, std::vector<std::vector<double>> means,
                             std::vector<std::vector<double>> m2)
    : priors_(std::move(priors)), means_(std::move(means)), m2_(std::move(m2)) {
  const std::size_t classes = priors_.size();
  if (means_.size() != classes || m2_.size() != classes) throw InvalidArgument("gaussian tables do not match the classes");
  dimensions_ = means_.front().size();
  sigmas_.resize(classes);
  for (std::size_t j = 0; j < classes; ++j) {
    if (means_[j].size() != dimensions_ || m2_[j].size() != dimensions_) {
      throw InvalidArgument("gaussian rows differ in dimensionality");
    }
    const auto n = static_cast<double>(priors_.count(j));
    sigmas_[j].resize(dimensions_);
    for (std::size_t k = 0; k < dimensions_; ++k) {
      if (!std::isfinite(means_[j][k]) || !(m2_[j][k] >= 0.0) || !std::isfinite(m2_[j][k])) {
        throw InvalidArgument("gaussian statistics must be finite with m2 >= 0");
      }
      sigmas_[j][k] = std::max(std::sqrt(m2_[j][k] / n), kMinSigma);
    }
  }
}

void GaussianModel::set_priors(ClassPriors priors) {
  check_same_labels(priors_, priors);
  priors_ = std::move(priors);
}

double GaussianModel::log_density(double x, double mean, double sigma) {
  const double z = (x - mean) / sigma;
  return -0.5 * z * z - std::log(sigma) - 0.5 * std::log(2.0 * std::numbers::pi);
}

double GaussianModel::density(double x, double mean, double sigma) {
  const double z = (x - mean) / sigma;
  return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * std::numbers::pi));
}

double GaussianModel::log_likelihood(const RealVector& x, std::size_t cls) const {
  check_class(priors_, cls);
  if (x.size() != dimensions_) {
    throw InvalidArgument("gaussian input has " + std::to_string(x.size()) + " features, model expects " +
                          std::to_string(dimensions_));
  }
  double total = 0.0;
  for (std::size_t k = 0; k < dimensions_; ++k) total += log_density(x[k], means_[cls][k], sigmas_[cls][k]);
  return total;
}

GaussianModel fit_gaussian(std::span<const RealVector> rows, std::span<const Label> labels) {
  check_sizes(rows.size(), labels.size());
  const std::size_t d = rows.front().size();
  for (const auto& r : rows) {
    if (r.size() != d) throw InvalidArgument("gaussian rows have inconsistent dimensionality");
    for (double v : r) {
      if (!std::isfinite(v)) throw InvalidArgument("gaussian features must be finite");
    }
  }
  ClassPriors priors = ClassPriors::fit(labels);
  for (std::size_t j = 0; j < priors.size(); ++j) {
    if (priors.count(j) < 2) throw InvalidArgument("class '" + priors.label(j) + "' has fewer than two samples");
  }
  const std::vector<std::size_t> cls = class_indices(priors, labels);

  std::vector<std::vector<double>> means(priors.size(), std::vector<double>(d, 0.0));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t k = 0; k < d; ++k) means[cls[r]][k] += rows[r][k];
  }
  for (std::size_t j = 0; j < priors.size(); ++j) {
    for (double& m : means[j]) m /= static_cast<double>(priors.count(j));
  }
  std::vector<std::vector<double>> m2(priors.size(), std::vector<double>(d, 0.0));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t k = 0; k < d; ++k) {
      const double dev = rows[r][k] - means[cls[r]][k];
      m2[cls[r]][k] += dev * dev;
    }
  }
  return GaussianModel(std::move(priors), std::move(means), std::move(m2));
}

// -------------------------------------------------------------- variant layer

std::string_view to_string(ModelVariant variant) {
  switch (variant) {
    case ModelVariant::categorical:
      return "categorical";
    case ModelVariant::bernoulli:
      return "bernoulli";
    case ModelVariant::multinomial:
      return "multinomial";
    case ModelVariant::gaussian:
      return "gaussian";
  }
  return "unknown";
}

ModelVariant parse_variant(std::string_view name) {
  if (name == "categorical") return ModelVariant::categorical;
  if (name == "bernoulli") return ModelVariant::bernoulli;
  if (name == "multinomial") return ModelVariant::multinomial;
  if (name == "gaussian") return ModelVariant::gaussian;
  throw InvalidArgument("unknown model variant '" + std::string(name) + "'");
}

ModelVariant variant_of(const NaiveBayesModel& model) { return static_cast<ModelVariant>(model.index()); }

const ClassPriors& priors_of(const NaiveBayesModel& model) {
  return std::visit([](const auto& m) -> const ClassPriors& { return m.priors(); }, model);
}

NaiveBayesModel with_priors(NaiveBayesModel model, std::vector<double> probabilities) {
  std::visit([&](auto& m) { m.set_priors(m.priors().with_probabilities(std::move(probabilities))); }, model);
  return model;
}

namespace {

template <class T>
const T& input_as(const ModelInput& input, const char* variant) {
  if (const auto* p = std::get_if<T>(&input)) return *p;
  throw InvalidArgument(std::string("input kind does not match the ") + variant + " model");
}

}  // namespace

double log_likelihood(const NaiveBayesModel& model, const ModelInput& input, std::size_t cls) {
  struct Visitor {
    const ModelInput& input;
    std::size_t cls;
    double operator()(const CategoricalModel& m) const {
      return m.log_likelihood(input_as<CategoricalSample>(input, "categorical"), cls);
    }
    double operator()(const BernoulliModel& m) const {
      return m.log_likelihood(input_as<SparseVector>(input, "bernoulli"), cls);
    }
    double operator()(const MultinomialModel& m) const {
      return m.log_likelihood(input_as<SparseVector>(input, "multinomial"), cls);
    }
    double operator()(const GaussianModel& m) const {
      return m.log_likelihood(input_as<RealVector>(input, "gaussian"), cls);
    }
  };
  return std::visit(Visitor{input, cls}, model);
}

PosteriorReport posterior_scores(const NaiveBayesModel& model, const ModelInput& input) {
  const ClassPriors& priors = priors_of(model);
  const std::size_t classes = priors.size();

  PosteriorReport report;
  report.labels = priors.labels();
  report.log_scores.resize(classes);

  // A text document with no in-vocabulary token carries no evidence; decide on
  // the priors alone rather than on the Bernoulli all-absent likelihood.
  const auto variant = variant_of(model);
  const auto* sparse = std::get_if<SparseVector>(&input);
  const bool no_evidence =
      (variant == ModelVariant::bernoulli || variant == ModelVariant::multinomial) && sparse != nullptr && sparse->empty();

  for (std::size_t j = 0; j < classes; ++j) {
    const double ll = log_likelihood(model, input, j);
    const double log_prior = std::log(priors.probability(j));
    report.log_scores[j] = no_evidence ? log_prior : log_prior + ll;
  }

  double best = kNegInf;
  for (double s : report.log_scores) best = std::max(best, s);

  report.posteriors.assign(classes, 0.0);
  if (best == kNegInf) {
    report.degenerate_evidence = true;
    report.posteriors.assign(classes, 1.0 / static_cast<double>(classes));
  } else {
    report.degenerate_evidence = no_evidence;
    double sum = 0.0;
    for (std::size_t j = 0; j < classes; ++j) {
      report.posteriors[j] = std::exp(report.log_scores[j] - best);
      sum += report.posteriors[j];
    }
    for (double& p : report.posteriors) p /= sum;
  }

  // Labels are ascending, so keeping the first of equals is the lexicographic rule.
  std::size_t pick = 0;
  for (std::size_t j = 1; j < classes; ++j) {
    const double s = report.log_scores[j];
    const double t = report.log_scores[pick];
    if (s > t || (s == t && priors.probability(j) > priors.probability(pick))) pick = j;
  }
  report.predicted = pick;
  return report;
}

Label classify(const NaiveBayesModel& model, const ModelInput& input) {
  return posterior_scores(model, input).predicted_label();
}

}  // namespace nbayes
