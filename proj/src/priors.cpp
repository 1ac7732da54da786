#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "nbayes/error.hpp"
#include "nbayes/models.hpp"

namespace nbayes {

ClassPriors ClassPriors::fit(std::span<const Label> labels) {
  if (labels.empty()) throw InvalidArgument("cannot estimate priors from an empty label list");
  std::map<Label, std::uint64_t> tally;
  for (const auto& label : labels) ++tally[label];
  std::vector<Label> names;
  std::vector<std::uint64_t> counts;
  for (auto& [name, n] : tally) {
    names.push_back(name);
    counts.push_back(n);
  }
  return from_counts(std::move(names), std::move(counts));
}

ClassPriors ClassPriors::from_counts(std::vector<Label> labels, std::vector<std::uint64_t> counts) {
  if (labels.empty()) throw InvalidArgument("priors need at least one class");
  if (labels.size() != counts.size()) throw InvalidArgument("prior labels and counts differ in length");

  std::vector<std::size_t> order(labels.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return labels[a] < labels[b]; });

  ClassPriors priors;
  for (std::size_t k : order) {
    if (!priors.labels_.empty() && priors.labels_.back() == labels[k]) {
      throw InvalidArgument("duplicate class label '" + labels[k] + "'");
    }
    if (counts[k] == 0) throw InvalidArgument("class '" + labels[k] + "' has no samples");
    priors.labels_.push_back(labels[k]);
    priors.counts_.push_back(counts[k]);
    priors.total_ += counts[k];
  }
  for (std::uint64_t n : priors.counts_) {
    priors.probabilities_.push_back(static_cast<double>(n) / static_cast<double>(priors.total_));
  }
  return priors;
}

ClassPriors ClassPriors::with_probabilities(std::vector<double> probabilities) const {
  if (probabilities.size() != labels_.size()) {
    throw InvalidArgument("expected " + std::to_string(labels_.size()) + " prior probabilities");
  }
  double sum = 0.0;
  for (double p : probabilities) {
    if (!(p > 0.0 && p <= 1.0)) throw InvalidArgument("prior probabilities must lie in (0, 1]");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw InvalidArgument("prior probabilities must sum to 1");
  ClassPriors copy = *this;
  copy.probabilities_ = std::move(probabilities);
  copy.overridden_ = true;
  return copy;
}

std::optional<std::size_t> ClassPriors::index_of(std::string_view label) const {
  auto it = std::lower_bound(labels_.begin(), labels_.end(), label,
                             [](const Label& a, std::string_view b) { return a < b; });
  if (it == labels_.end() || *it != label) return std::nullopt;
  return static_cast<std::size_t>(it - labels_.begin());
}

}  // namespace nbayes
