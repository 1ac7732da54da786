#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nbayes/models.hpp"
#include "nbayes/vectorizer.hpp"

namespace nbayes {

struct Document {
  Label label;
  std::string text;

  friend bool operator==(const Document&, const Document&) = default;
};

struct LabeledCorpus {
  std::vector<Document> documents;
  std::set<Label> label_set;

  /// Throws InvalidArgument when documents is empty.
  static LabeledCorpus from_documents(std::vector<Document> documents);

  std::size_t size() const noexcept { return documents.size(); }
  std::vector<Label> labels() const;
};

/// "label<TAB>text" per non-empty line. A trailing '\r' is dropped.
/// Throws IoError for an unreadable file, ParseError (1-based line) for a line
/// without a tab, and InvalidArgument for a file with no records.
LabeledCorpus load_corpus(const std::filesystem::path& path);
LabeledCorpus parse_corpus(std::string_view contents);

/// "label,v1,v2,..." rows for the categorical variant.
struct CategoricalCorpus {
  std::vector<Label> labels;
  std::vector<CategoricalSample> samples;
};
CategoricalCorpus load_categorical_csv(const std::filesystem::path& path);
CategoricalCorpus parse_categorical_csv(std::string_view contents);

/// "label,x1,x2,..." rows for the Gaussian variant.
struct NumericCorpus {
  std::vector<Label> labels;
  std::vector<RealVector> rows;
};
NumericCorpus load_numeric_csv(const std::filesystem::path& path);
NumericCorpus parse_numeric_csv(std::string_view contents);

/// Seeded shuffle key of document index i.
std::uint64_t split_key(std::uint64_t seed, std::uint64_t index);

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Orders 0..n-1 by split_key(seed, i) (index breaks ties) and gives the first
/// round(n * test_fraction) to the test side. Throws InvalidArgument if
/// test_fraction is outside (0, 1), n < 2, or either side would be empty.
SplitIndices split_indices(std::size_t n, double test_fraction, std::uint64_t seed);

std::pair<LabeledCorpus, LabeledCorpus> split(const LabeledCorpus& corpus, double test_fraction, std::uint64_t seed);

struct LabelMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  /// Denominator was zero; the value is reported as 0.
  bool precision_undefined = false;
  bool recall_undefined = false;
};

inline constexpr std::string_view kUnknownLabel = "<unknown>";

struct EvaluationReport {
  /// Model classes; also the confusion-matrix columns.
  std::vector<Label> labels;
  /// Rows follow labels; when has_unknown_row, one extra last row collects
  /// test documents whose true label the model never saw.
  std::vector<std::vector<std::uint64_t>> confusion;
  bool has_unknown_row = false;
  std::vector<LabelMetrics> metrics;
  double accuracy = 0.0;
  std::uint64_t n_test = 0;

  void print(std::ostream& out) const;
  /// accuracy, n_test, per-label {precision, recall, f1}, confusion as nested
  /// label-keyed counts.
  std::string to_json() const;
};

/// Accumulates (true, predicted) pairs. Tallies merge associatively.
class ConfusionTally {
 public:
  explicit ConfusionTally(std::vector<Label> model_labels);

  void add(std::string_view truth, std::string_view predicted);
  void merge(const ConfusionTally& other);
  EvaluationReport report() const;

 private:
  std::vector<Label> labels_;
  std::vector<std::vector<std::uint64_t>> counts_;  // labels_.size() + 1 rows, last = unknown
};

/// Pipeline, vectorize and classify every test document, then tally.
EvaluationReport evaluate(const NaiveBayesModel& model, const TextFeaturizer& featurizer, const LabeledCorpus& test);

/// Same for pre-featurized inputs (categorical tuples, numeric rows).
EvaluationReport evaluate(const NaiveBayesModel& model, std::span<const ModelInput> inputs,
                          std::span<const Label> truths);

}  // namespace nbayes
