#include "nbayes/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>
#include <vector>

#include "CLI11.hpp"
#include "nbayes/archive.hpp"
#include "nbayes/error.hpp"
#include "nbayes/evaluation.hpp"
#include "nbayes/training.hpp"

namespace nbayes::cli {
namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CommonFlags {
  std::string input;
  std::string model;
  std::string variant = "multinomial";
  std::string weighting;
  double alpha = 1.0;
  std::size_t ngram = 1;
  std::string stop_words = "none";
  std::string stem = "off";
  std::string lowercase = "on";
};

struct EvaluateFlags {
  double test_fraction = 0.2;
  std::uint64_t seed = 42;
  std::string report_out;
};

struct PredictFlags {
  std::string model;
  bool probs = false;
  std::vector<std::string> text;
};

struct InspectFlags {
  std::string model;
  std::size_t top_k = 0;
  bool vocab = false;
};

void add_common_flags(CLI::App& cmd, CommonFlags& f, bool model_required) {
  cmd.add_option("--input", f.input, "Training corpus")->required();
  auto* model = cmd.add_option("--model", f.model, "Model archive path");
  if (model_required) model->required();
  cmd.add_option("--variant", f.variant, "categorical | bernoulli | multinomial | gaussian")
      ->check(CLI::IsMember({"categorical", "bernoulli", "multinomial", "gaussian"}))
      ->capture_default_str();
  cmd.add_option("--weighting", f.weighting, "binary | raw_count | normalized_tf | tfidf")
      ->check(CLI::IsMember({"binary", "raw_count", "normalized_tf", "tfidf"}));
  cmd.add_option("--alpha", f.alpha, "Additive smoothing parameter")->capture_default_str();
  cmd.add_option("--ngram", f.ngram, "n-gram size")->check(CLI::PositiveNumber)->capture_default_str();
  cmd.add_option("--stop-words", f.stop_words, "none | dict:PATH | top:N")->capture_default_str();
  cmd.add_option("--stem", f.stem, "Porter stemming")->check(CLI::IsMember({"on", "off"}))->capture_default_str();
  cmd.add_option("--lowercase", f.lowercase, "Lowercase tokens")
      ->check(CLI::IsMember({"on", "off"}))
      ->capture_default_str();
}

std::string format_double(double value, int precision = 6) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(precision) << value;
  return s.str();
}

std::string format_exact(double value) {
  std::ostringstream s;
  s << std::setprecision(std::numeric_limits<double>::max_digits10) << value;
  return s.str();
}

bool is_text_variant(ModelVariant v) { return v == ModelVariant::bernoulli || v == ModelVariant::multinomial; }

TextTrainOptions text_options(const CommonFlags& f, ModelVariant variant, bool weighting_given) {
  TextTrainOptions opt;
  opt.variant = variant;
  opt.alpha = f.alpha;
  if (!(f.alpha >= 0.0) || !std::isfinite(f.alpha)) throw UsageError("--alpha must be a finite value >= 0");

  if (weighting_given) {
    opt.weighting = parse_weighting(f.weighting);
  } else {
    opt.weighting = variant == ModelVariant::bernoulli ? WeightingMode::binary : WeightingMode::raw_count;
  }
  try {
    check_compatible(variant, opt.weighting);
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }

  opt.pipeline.lowercase = f.lowercase == "on";
  opt.pipeline.stemming = f.stem == "on";
  opt.pipeline.ngram_size = f.ngram;

  const std::string_view spec = f.stop_words;
  if (spec == "none") {
    opt.pipeline.stop_words = StopWordMode::none;
  } else if (spec.starts_with("dict:") && spec.size() > 5) {
    opt.pipeline.stop_words = StopWordMode::dictionary;
    opt.dictionary = load_stop_list(std::string(spec.substr(5)));
  } else if (spec.starts_with("top:")) {
    std::size_t n = 0;
    const auto digits = spec.substr(4);
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
    if (ec != std::errc{} || ptr != digits.data() + digits.size() || n == 0) {
      throw UsageError("--stop-words top:N needs a positive integer N");
    }
    opt.pipeline.stop_words = StopWordMode::frequency_top_n;
    opt.pipeline.stop_top_n = n;
  } else {
    throw UsageError("--stop-words must be none, dict:PATH or top:N");
  }
  return opt;
}

void check_feature_variant_flags(ModelVariant variant, bool weighting_given) {
  if (weighting_given) {
    throw UsageError("--weighting cannot be used with the " + std::string(to_string(variant)) + " model");
  }
}

void print_class_summary(const ClassPriors& priors, std::ostream& out) {
  out << "classes: " << priors.size() << '\n';
  for (std::size_t j = 0; j < priors.size(); ++j) {
    out << "  " << priors.label(j) << "  count " << priors.count(j) << "  prior " << format_double(priors.probability(j))
        << '\n';
  }
}

// Trains on the whole corpus (train) or the training side of a split (evaluate).
struct Trained {
  ModelArchive archive;
  std::size_t n_train = 0;
  std::optional<EvaluationReport> report;
};

Trained train_from_flags(const CommonFlags& f, bool weighting_given, const std::optional<EvaluateFlags>& eval) {
  const ModelVariant variant = parse_variant(f.variant);
  if (eval && !(eval->test_fraction > 0.0 && eval->test_fraction < 1.0)) {
    throw UsageError("--test-fraction must lie in (0, 1)");
  }

  if (is_text_variant(variant)) {
    const TextTrainOptions opt = text_options(f, variant, weighting_given);
    LabeledCorpus corpus = load_corpus(f.input);
    std::optional<LabeledCorpus> test;
    if (eval) {
      auto [train, held_out] = split(corpus, eval->test_fraction, eval->seed);
      corpus = std::move(train);
      test = std::move(held_out);
    }
    Trained t{train_text_model(corpus, opt), corpus.size(), std::nullopt};
    if (test) t.report = evaluate(t.archive.model, *t.archive.featurizer, *test);
    return t;
  }

  check_feature_variant_flags(variant, weighting_given);
  if (variant == ModelVariant::categorical) {
    if (!(f.alpha >= 0.0) || !std::isfinite(f.alpha)) throw UsageError("--alpha must be a finite value >= 0");
    CategoricalCorpus corpus = load_categorical_csv(f.input);
    if (!eval) return {train_categorical_model(corpus, f.alpha), corpus.samples.size(), std::nullopt};
    const SplitIndices idx = split_indices(corpus.samples.size(), eval->test_fraction, eval->seed);
    CategoricalCorpus train;
    std::vector<ModelInput> inputs;
    std::vector<Label> truths;
    for (std::size_t i : idx.train) {
      train.samples.push_back(corpus.samples[i]);
      train.labels.push_back(corpus.labels[i]);
    }
    for (std::size_t i : idx.test) {
      inputs.emplace_back(corpus.samples[i]);
      truths.push_back(corpus.labels[i]);
    }
    Trained t{train_categorical_model(train, f.alpha), train.samples.size(), std::nullopt};
    t.report = evaluate(t.archive.model, inputs, truths);
    return t;
  }

  NumericCorpus corpus = load_numeric_csv(f.input);
  if (!eval) return {train_gaussian_model(corpus), corpus.rows.size(), std::nullopt};
  const SplitIndices idx = split_indices(corpus.rows.size(), eval->test_fraction, eval->seed);
  NumericCorpus train;
  std::vector<ModelInput> inputs;
  std::vector<Label> truths;
  for (std::size_t i : idx.train) {
    train.rows.push_back(corpus.rows[i]);
    train.labels.push_back(corpus.labels[i]);
  }
  for (std::size_t i : idx.test) {
    inputs.emplace_back(corpus.rows[i]);
    truths.push_back(corpus.labels[i]);
  }
  Trained t{train_gaussian_model(train), train.rows.size(), std::nullopt};
  t.report = evaluate(t.archive.model, inputs, truths);
  return t;
}

int cmd_train(const CommonFlags& f, bool weighting_given, std::ostream& out) {
  Trained t = train_from_flags(f, weighting_given, std::nullopt);
  save_archive(f.model, t.archive);
  out << "trained " << to_string(variant_of(t.archive.model)) << " model on " << t.n_train << " documents\n";
  print_class_summary(priors_of(t.archive.model), out);
  if (t.archive.featurizer) out << "vocabulary size: " << t.archive.featurizer->vocabulary.size() << '\n';
  out << "wrote " << f.model << '\n';
  return kExitOk;
}

int cmd_evaluate(const CommonFlags& f, bool weighting_given, const EvaluateFlags& e, std::ostream& out) {
  Trained t = train_from_flags(f, weighting_given, e);
  out << "trained " << to_string(variant_of(t.archive.model)) << " model on " << t.n_train << " documents\n";
  t.report->print(out);
  if (!e.report_out.empty()) {
    std::ofstream file(e.report_out, std::ios::binary | std::ios::trunc);
    if (!file) throw IoError("cannot open report file for writing: " + e.report_out);
    file << t.report->to_json();
    if (!file) throw IoError("error writing report file: " + e.report_out);
  }
  if (!f.model.empty()) save_archive(f.model, t.archive);
  return kExitOk;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  const bool commas = line.find(',') != std::string_view::npos;
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (pos <= line.size()) {
    std::size_t end = commas ? line.find(',', pos) : line.find_first_of(" \t", pos);
    if (end == std::string_view::npos) end = line.size();
    std::string_view field = line.substr(pos, end - pos);
    while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
    while (!field.empty() && (field.back() == ' ' || field.back() == '\t')) field.remove_suffix(1);
    if (!field.empty() || commas) fields.push_back(field);
    pos = end + 1;
  }
  return fields;
}

ModelInput make_input(const ModelArchive& archive, std::string_view line) {
  switch (variant_of(archive.model)) {
    case ModelVariant::bernoulli:
    case ModelVariant::multinomial:
      return archive.featurizer->featurize(line);
    case ModelVariant::categorical: {
      CategoricalSample sample;
      for (auto field : split_fields(line)) sample.emplace_back(field);
      return sample;
    }
    case ModelVariant::gaussian: {
      RealVector row;
      for (auto field : split_fields(line)) {
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
        if (ec != std::errc{} || ptr != field.data() + field.size()) {
          throw InvalidArgument("not a number: '" + std::string(field) + "'");
        }
        row.push_back(v);
      }
      return row;
    }
  }
  throw InvalidArgument("unknown variant");
}

int cmd_predict(const PredictFlags& f, std::istream& in, std::ostream& out, std::ostream& err) {
  const ModelArchive archive = load_archive(f.model);
  std::vector<std::string> docs;
  if (!f.text.empty()) {
    std::string joined = f.text.front();
    for (std::size_t i = 1; i < f.text.size(); ++i) joined += " " + f.text[i];
    docs.push_back(std::move(joined));
  } else {
    for (std::string line; std::getline(in, line);) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      docs.push_back(std::move(line));
    }
  }

  for (std::size_t d = 0; d < docs.size(); ++d) {
    const PosteriorReport report = posterior_scores(archive.model, make_input(archive, docs[d]));
    out << report.predicted_label();
    if (f.probs) {
      for (std::size_t j = 0; j < report.labels.size(); ++j) {
        out << '\t' << report.labels[j] << '=' << format_exact(report.posteriors[j]);
      }
    }
    out << '\n';
    if (report.degenerate_evidence) {
      err << "warning: document " << d + 1 << " has no usable evidence; decided by class priors alone\n";
    }
  }
  return kExitOk;
}

int cmd_inspect(const InspectFlags& f, std::ostream& out) {
  const ModelArchive archive = load_archive(f.model);
  const ModelVariant variant = variant_of(archive.model);
  const ClassPriors& priors = priors_of(archive.model);

  out << "variant: " << to_string(variant) << '\n';
  print_class_summary(priors, out);
  if (priors.overridden()) out << "priors: overridden\n";
  if (const auto* m = std::get_if<MultinomialModel>(&archive.model)) out << "alpha: " << format_exact(m->alpha()) << '\n';
  if (const auto* m = std::get_if<CategoricalModel>(&archive.model)) {
    out << "alpha: " << format_exact(m->alpha()) << '\n';
    out << "positions: " << m->dimensions() << '\n';
    for (std::size_t i = 0; i < m->dimensions(); ++i) {
      out << "  position " << i << ": " << m->distinct_values(i) << " distinct values\n";
    }
  }
  if (const auto* m = std::get_if<GaussianModel>(&archive.model)) out << "features: " << m->dimensions() << '\n';
  if (archive.featurizer) {
    out << "weighting: " << to_string(archive.featurizer->weighting) << '\n';
    out << "vocabulary size: " << archive.featurizer->vocabulary.size() << '\n';
  }

  if (f.top_k > 0 && archive.featurizer) {
    const Vocabulary& vocab = archive.featurizer->vocabulary;
    for (std::size_t j = 0; j < priors.size(); ++j) {
      std::vector<std::pair<double, TokenId>> ranked;
      ranked.reserve(vocab.size());
      for (std::size_t i = 0; i < vocab.size(); ++i) {
        const auto id = static_cast<TokenId>(i);
        const double p = variant == ModelVariant::multinomial
                             ? std::get<MultinomialModel>(archive.model).conditional(j, id)
                             : std::get<BernoulliModel>(archive.model).estimate(j, id);
        ranked.emplace_back(p, id);
      }
      const std::size_t k = std::min(f.top_k, ranked.size());
      std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(k), ranked.end(),
                        [](const auto& a, const auto& b) { return a.first > b.first || (a.first == b.first && a.second < b.second); });
      out << "top " << k << " tokens for class " << priors.label(j) << ":\n";
      for (std::size_t r = 0; r < k; ++r) {
        out << "  " << vocab.token(ranked[r].second) << '\t' << format_exact(ranked[r].first) << '\n';
      }
    }
  }
  if (f.vocab && archive.featurizer) archive.featurizer->vocabulary.dump(out);
  return kExitOk;
}

}  // namespace

int run(std::span<const std::string> args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Naive Bayes text classification toolkit", "nbayes"};
  app.require_subcommand(1);

  CommonFlags train_flags;
  auto* train = app.add_subcommand("train", "Fit a model and write its archive");
  add_common_flags(*train, train_flags, true);

  CommonFlags eval_flags;
  EvaluateFlags eval_extra;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Split, train, and score on the held-out part");
  add_common_flags(*evaluate_cmd, eval_flags, false);
  evaluate_cmd->add_option("--test-fraction", eval_extra.test_fraction, "Held-out fraction in (0, 1)")
      ->capture_default_str();
  evaluate_cmd->add_option("--seed", eval_extra.seed, "Split seed")->capture_default_str();
  evaluate_cmd->add_option("--report-out", eval_extra.report_out, "Write the JSON report here");

  PredictFlags predict_flags;
  auto* predict = app.add_subcommand("predict", "Classify text given as argument or one document per stdin line");
  predict->add_option("--model", predict_flags.model, "Model archive")->required();
  predict->add_flag("--probs", predict_flags.probs, "Print normalized posteriors");
  predict->add_option("text", predict_flags.text, "Document text");

  InspectFlags inspect_flags;
  auto* inspect = app.add_subcommand("inspect", "Describe a model archive");
  inspect->add_option("--model", inspect_flags.model, "Model archive")->required();
  inspect->add_option("--top-k", inspect_flags.top_k, "Highest-conditional tokens per class");
  inspect->add_flag("--vocab", inspect_flags.vocab, "Dump the vocabulary (id, token, document frequency)");

  std::vector<const char*> argv;
  argv.push_back("nbayes");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (train->parsed()) return cmd_train(train_flags, train->count("--weighting") > 0, out);
    if (evaluate_cmd->parsed()) return cmd_evaluate(eval_flags, evaluate_cmd->count("--weighting") > 0, eval_extra, out);
    if (predict->parsed()) return cmd_predict(predict_flags, in, out, err);
    if (inspect->parsed()) return cmd_inspect(inspect_flags, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const FormatError& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace nbayes::cli
