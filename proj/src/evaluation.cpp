#include "nbayes/evaluation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "nbayes/error.hpp"

namespace nbayes {
namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open corpus file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("error reading corpus file: " + path.string());
  return buffer.str();
}

// Calls fn(line_number, line) for every line with the trailing '\r' removed.
template <class Fn>
void for_each_line(std::string_view contents, Fn&& fn) {
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < contents.size()) {
    std::size_t eol = contents.find('\n', pos);
    if (eol == std::string_view::npos) eol = contents.size();
    std::string_view line = contents.substr(pos, eol - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    fn(++line_no, line);
    pos = eol + 1;
  }
}

bool blank(std::string_view line) {
  return std::all_of(line.begin(), line.end(), [](char c) { return c == ' ' || c == '\t'; });
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (true) {
    std::size_t comma = line.find(',', pos);
    fields.push_back(trim(line.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos)));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return fields;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

double safe_ratio(std::uint64_t num, std::uint64_t den, bool& undefined) {
  undefined = den == 0;
  return undefined ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

LabeledCorpus LabeledCorpus::from_documents(std::vector<Document> documents) {
  if (documents.empty()) throw InvalidArgument("empty corpus");
  LabeledCorpus corpus;
  for (const auto& doc : documents) corpus.label_set.insert(doc.label);
  corpus.documents = std::move(documents);
  return corpus;
}

std::vector<Label> LabeledCorpus::labels() const {
  std::vector<Label> out;
  out.reserve(documents.size());
  for (const auto& doc : documents) out.push_back(doc.label);
  return out;
}

LabeledCorpus parse_corpus(std::string_view contents) {
  std::vector<Document> docs;
  for_each_line(contents, [&](std::size_t line_no, std::string_view line) {
    if (line.empty()) return;
    const std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos) throw ParseError(line_no, "expected 'label<TAB>text'");
    if (tab == 0) throw ParseError(line_no, "empty label");
    docs.push_back({std::string(line.substr(0, tab)), std::string(line.substr(tab + 1))});
  });
  return LabeledCorpus::from_documents(std::move(docs));
}

LabeledCorpus load_corpus(const std::filesystem::path& path) { return parse_corpus(read_file(path)); }

CategoricalCorpus parse_categorical_csv(std::string_view contents) {
  CategoricalCorpus corpus;
  for_each_line(contents, [&](std::size_t line_no, std::string_view line) {
    if (blank(line)) return;
    auto fields = split_commas(line);
    if (fields.size() < 2) throw ParseError(line_no, "expected 'label,v1,v2,...'");
    if (fields[0].empty()) throw ParseError(line_no, "empty label");
    CategoricalSample sample;
    for (std::size_t k = 1; k < fields.size(); ++k) {
      if (fields[k].empty()) throw ParseError(line_no, "empty feature value");
      sample.emplace_back(fields[k]);
    }
    if (!corpus.samples.empty() && sample.size() != corpus.samples.front().size()) {
      throw ParseError(line_no, "inconsistent number of feature values");
    }
    corpus.labels.emplace_back(fields[0]);
    corpus.samples.push_back(std::move(sample));
  });
  if (corpus.samples.empty()) throw InvalidArgument("empty corpus");
  return corpus;
}

CategoricalCorpus load_categorical_csv(const std::filesystem::path& path) {
  return parse_categorical_csv(read_file(path));
}

NumericCorpus parse_numeric_csv(std::string_view contents) {
  NumericCorpus corpus;
  for_each_line(contents, [&](std::size_t line_no, std::string_view line) {
    if (blank(line)) return;
    auto fields = split_commas(line);
    if (fields.size() < 2) throw ParseError(line_no, "expected 'label,x1,x2,...'");
    if (fields[0].empty()) throw ParseError(line_no, "empty label");
    RealVector row;
    for (std::size_t k = 1; k < fields.size(); ++k) {
      double value = 0.0;
      const auto* end = fields[k].data() + fields[k].size();
      auto [ptr, ec] = std::from_chars(fields[k].data(), end, value);
      if (ec != std::errc{} || ptr != end || !std::isfinite(value)) {
        throw ParseError(line_no, "not a finite number: '" + std::string(fields[k]) + "'");
      }
      row.push_back(value);
    }
    if (!corpus.rows.empty() && row.size() != corpus.rows.front().size()) {
      throw ParseError(line_no, "inconsistent number of features");
    }
    corpus.labels.emplace_back(fields[0]);
    corpus.rows.push_back(std::move(row));
  });
  if (corpus.rows.empty()) throw InvalidArgument("empty corpus");
  return corpus;
}

NumericCorpus load_numeric_csv(const std::filesystem::path& path) { return parse_numeric_csv(read_file(path)); }

std::uint64_t split_key(std::uint64_t seed, std::uint64_t index) { return splitmix64(splitmix64(seed) ^ index); }

SplitIndices split_indices(std::size_t n, double test_fraction, std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) throw InvalidArgument("test fraction must lie in (0, 1)");
  if (n < 2) throw InvalidArgument("splitting needs at least two documents");
  const auto n_test = static_cast<std::size_t>(std::llround(static_cast<double>(n) * test_fraction));
  if (n_test == 0 || n_test == n) throw InvalidArgument("split would leave one partition empty");

  std::vector<std::pair<std::uint64_t, std::size_t>> keyed(n);
  for (std::size_t i = 0; i < n; ++i) keyed[i] = {split_key(seed, i), i};
  std::sort(keyed.begin(), keyed.end());

  SplitIndices out;
  out.test.reserve(n_test);
  out.train.reserve(n - n_test);
  for (std::size_t k = 0; k < n; ++k) (k < n_test ? out.test : out.train).push_back(keyed[k].second);
  return out;
}

std::pair<LabeledCorpus, LabeledCorpus> split(const LabeledCorpus& corpus, double test_fraction, std::uint64_t seed) {
  const SplitIndices idx = split_indices(corpus.size(), test_fraction, seed);
  auto gather = [&](const std::vector<std::size_t>& ids) {
    std::vector<Document> docs;
    docs.reserve(ids.size());
    for (std::size_t i : ids) docs.push_back(corpus.documents[i]);
    return LabeledCorpus::from_documents(std::move(docs));
  };
  return {gather(idx.train), gather(idx.test)};
}

// ------------------------------------------------------------------- tallying

ConfusionTally::ConfusionTally(std::vector<Label> model_labels)
    : labels_(std::move(model_labels)),
      counts_(labels_.size() + 1, std::vector<std::uint64_t>(labels_.size(), 0)) {}

void ConfusionTally::add(std::string_view truth, std::string_view predicted) {
  auto index = [&](std::string_view label) {
    return static_cast<std::size_t>(std::find(labels_.begin(), labels_.end(), label) - labels_.begin());
  };
  const std::size_t col = index(predicted);
  if (col == labels_.size()) throw InvalidArgument("prediction '" + std::string(predicted) + "' is not a model class");
  ++counts_[index(truth)][col];
}

void ConfusionTally::merge(const ConfusionTally& other) {
  if (other.labels_ != labels_) throw InvalidArgument("cannot merge tallies over different classes");
  for (std::size_t r = 0; r < counts_.size(); ++r) {
    for (std::size_t c = 0; c < labels_.size(); ++c) counts_[r][c] += other.counts_[r][c];
  }
}

EvaluationReport ConfusionTally::report() const {
  EvaluationReport rep;
  rep.labels = labels_;
  const std::size_t k = labels_.size();
  rep.has_unknown_row = std::any_of(counts_[k].begin(), counts_[k].end(), [](std::uint64_t c) { return c > 0; });
  rep.confusion.assign(counts_.begin(), counts_.begin() + static_cast<std::ptrdiff_t>(rep.has_unknown_row ? k + 1 : k));

  std::uint64_t trace = 0;
  for (const auto& row : rep.confusion) rep.n_test += std::accumulate(row.begin(), row.end(), std::uint64_t{0});
  for (std::size_t j = 0; j < k; ++j) trace += rep.confusion[j][j];
  rep.accuracy = rep.n_test == 0 ? 0.0 : static_cast<double>(trace) / static_cast<double>(rep.n_test);

  rep.metrics.resize(k);
  for (std::size_t j = 0; j < k; ++j) {
    std::uint64_t row_sum = std::accumulate(rep.confusion[j].begin(), rep.confusion[j].end(), std::uint64_t{0});
    std::uint64_t col_sum = 0;
    for (const auto& row : rep.confusion) col_sum += row[j];
    LabelMetrics& m = rep.metrics[j];
    m.precision = safe_ratio(rep.confusion[j][j], col_sum, m.precision_undefined);
    m.recall = safe_ratio(rep.confusion[j][j], row_sum, m.recall_undefined);
    m.f1 = (m.precision + m.recall) > 0.0 ? 2.0 * m.precision * m.recall / (m.precision + m.recall) : 0.0;
  }
  return rep;
}

void EvaluationReport::print(std::ostream& out) const {
  const auto flags = out.flags();
  const auto precision = out.precision();
  out << std::fixed << std::setprecision(4);
  out << "n_test    " << n_test << '\n';
  out << "accuracy  " << accuracy << "\n\n";

  std::size_t width = kUnknownLabel.size();
  for (const auto& l : labels) width = std::max(width, l.size());
  width += 2;

  out << std::left << std::setw(static_cast<int>(width)) << "label" << std::right << std::setw(11) << "precision"
      << std::setw(11) << "recall" << std::setw(11) << "f1" << '\n';
  for (std::size_t j = 0; j < labels.size(); ++j) {
    const auto& m = metrics[j];
    out << std::left << std::setw(static_cast<int>(width)) << labels[j] << std::right << std::setw(10) << m.precision
        << (m.precision_undefined ? "*" : " ") << std::setw(10) << m.recall << (m.recall_undefined ? "*" : " ")
        << std::setw(10) << m.f1 << '\n';
  }
  const bool any_undefined = std::any_of(metrics.begin(), metrics.end(), [](const LabelMetrics& m) {
    return m.precision_undefined || m.recall_undefined;
  });
  if (any_undefined) out << "(* zero denominator, reported as 0)\n";

  out << "\nconfusion (rows = true, columns = predicted)\n";
  out << std::left << std::setw(static_cast<int>(width)) << "";
  for (const auto& l : labels) out << std::right << std::setw(static_cast<int>(std::max<std::size_t>(l.size(), 6) + 2)) << l;
  out << '\n';
  for (std::size_t r = 0; r < confusion.size(); ++r) {
    const std::string& name = r < labels.size() ? labels[r] : std::string(kUnknownLabel);
    out << std::left << std::setw(static_cast<int>(width)) << name;
    for (std::size_t c = 0; c < labels.size(); ++c) {
      out << std::right << std::setw(static_cast<int>(std::max<std::size_t>(labels[c].size(), 6) + 2)) << confusion[r][c];
    }
    out << '\n';
  }
  out.flags(flags);
  out.precision(precision);
}

std::string EvaluationReport::to_json() const {
  nlohmann::ordered_json doc;
  doc["accuracy"] = accuracy;
  doc["n_test"] = n_test;
  nlohmann::ordered_json per_label = nlohmann::ordered_json::object();
  for (std::size_t j = 0; j < labels.size(); ++j) {
    per_label[labels[j]] = {{"precision", metrics[j].precision},
                            {"recall", metrics[j].recall},
                            {"f1", metrics[j].f1},
                            {"precision_undefined", metrics[j].precision_undefined},
                            {"recall_undefined", metrics[j].recall_undefined}};
  }
  doc["labels"] = std::move(per_label);
  nlohmann::ordered_json matrix = nlohmann::ordered_json::object();
  for (std::size_t r = 0; r < confusion.size(); ++r) {
    nlohmann::ordered_json row = nlohmann::ordered_json::object();
    for (std::size_t c = 0; c < labels.size(); ++c) row[labels[c]] = confusion[r][c];
    matrix[r < labels.size() ? labels[r] : std::string(kUnknownLabel)] = std::move(row);
  }
  doc["confusion"] = std::move(matrix);
  return doc.dump(2) + "\n";
}

EvaluationReport evaluate(const NaiveBayesModel& model, const TextFeaturizer& featurizer, const LabeledCorpus& test) {
  ConfusionTally tally(priors_of(model).labels());
  for (const auto& doc : test.documents) {
    tally.add(doc.label, classify(model, ModelInput{featurizer.featurize(doc.text)}));
  }
  return tally.report();
}

EvaluationReport evaluate(const NaiveBayesModel& model, std::span<const ModelInput> inputs,
                          std::span<const Label> truths) {
  if (inputs.size() != truths.size()) throw InvalidArgument("inputs and labels differ in length");
  ConfusionTally tally(priors_of(model).labels());
  for (std::size_t i = 0; i < inputs.size(); ++i) tally.add(truths[i], classify(model, inputs[i]));
  return tally.report();
}

}  // namespace nbayes
