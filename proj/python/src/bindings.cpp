#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <string>
#include <utility>
#include <vector>

#include "nbayes/archive.hpp"
#include "nbayes/error.hpp"
#include "nbayes/evaluation.hpp"
#include "nbayes/porter_stemmer.hpp"
#include "nbayes/training.hpp"

namespace py = pybind11;
using namespace nbayes;

namespace {

using DocumentPairs = std::vector<std::pair<Label, std::string>>;

LabeledCorpus to_corpus(const DocumentPairs& docs) {
  std::vector<Document> out;
  out.reserve(docs.size());
  for (const auto& [label, text] : docs) out.push_back({label, text});
  return LabeledCorpus::from_documents(std::move(out));
}

DocumentPairs to_pairs(const LabeledCorpus& corpus) {
  DocumentPairs out;
  out.reserve(corpus.size());
  for (const auto& d : corpus.documents) out.emplace_back(d.label, d.text);
  return out;
}

// Text models take a string, categorical models a sequence of strings,
// Gaussian models a sequence of floats.
ModelInput to_input(const ModelArchive& archive, const py::handle& x) {
  switch (variant_of(archive.model)) {
    case ModelVariant::bernoulli:
    case ModelVariant::multinomial:
      if (py::isinstance<SparseVector>(x)) return x.cast<SparseVector>();
      return archive.featurizer->featurize(x.cast<std::string>());
    case ModelVariant::categorical:
      return x.cast<CategoricalSample>();
    case ModelVariant::gaussian:
      return x.cast<RealVector>();
  }
  throw InvalidArgument("unknown model variant");
}

py::dict report_dict(const EvaluationReport& r) {
  py::dict metrics;
  for (std::size_t j = 0; j < r.labels.size(); ++j) {
    py::dict m;
    m["precision"] = r.metrics[j].precision;
    m["recall"] = r.metrics[j].recall;
    m["f1"] = r.metrics[j].f1;
    m["precision_undefined"] = r.metrics[j].precision_undefined;
    m["recall_undefined"] = r.metrics[j].recall_undefined;
    metrics[py::str(r.labels[j])] = m;
  }
  py::dict out;
  out["accuracy"] = r.accuracy;
  out["n_test"] = r.n_test;
  out["labels"] = r.labels;
  out["confusion"] = r.confusion;
  out["has_unknown_row"] = r.has_unknown_row;
  out["metrics"] = metrics;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Naive Bayes classifiers with a text preprocessing pipeline";

  static py::exception<FormatError> format_error(m, "FormatError", PyExc_ValueError);
  static py::exception<ParseError> parse_error(m, "ParseError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const FormatError& e) {
      py::set_error(format_error, e.what());
    } catch (const ParseError& e) {
      py::set_error(parse_error, e.what());
    } catch (const IoError& e) {
      py::set_error(PyExc_OSError, e.what());
    }
  });

  py::enum_<StopWordMode>(m, "StopWordMode")
      .value("none", StopWordMode::none)
      .value("dictionary", StopWordMode::dictionary)
      .value("frequency_top_n", StopWordMode::frequency_top_n);

  py::class_<PipelineConfig>(m, "PipelineConfig")
      .def(py::init([](bool lowercase, bool strip_punctuation, StopWordMode stop_words, std::size_t stop_top_n,
                       bool stemming, std::size_t ngram_size) {
             PipelineConfig c{lowercase, strip_punctuation, stop_words, stop_top_n, stemming, ngram_size};
             c.validate();
             return c;
           }),
           py::arg("lowercase") = true, py::arg("strip_punctuation") = true,
           py::arg("stop_words") = StopWordMode::none, py::arg("stop_top_n") = 0, py::arg("stemming") = false,
           py::arg("ngram_size") = 1)
      .def_readwrite("lowercase", &PipelineConfig::lowercase)
      .def_readwrite("strip_punctuation", &PipelineConfig::strip_punctuation)
      .def_readwrite("stop_words", &PipelineConfig::stop_words)
      .def_readwrite("stop_top_n", &PipelineConfig::stop_top_n)
      .def_readwrite("stemming", &PipelineConfig::stemming)
      .def_readwrite("ngram_size", &PipelineConfig::ngram_size)
      .def(py::self == py::self);

  m.def(
      "tokenize", [](std::string_view text, const PipelineConfig& c) { return tokenize(text, c); }, py::arg("text"),
      py::arg("config") = PipelineConfig{});
  m.def("porter_stem", &porter_stem, py::arg("word"));
  m.def("ngrams", &ngrams, py::arg("tokens"), py::arg("n"));
  m.def(
      "build_stop_list",
      [](const std::vector<TokenStream>& corpus, std::size_t n) { return build_stop_list(corpus, n).words(); },
      py::arg("corpus"), py::arg("n"));
  m.def(
      "run_pipeline",
      [](std::string_view text, PipelineConfig c, std::optional<std::set<std::string>> stop_words) {
        if (!stop_words) return run_pipeline(text, c);
        c.stop_words = StopWordMode::dictionary;
        StopList stops(std::move(*stop_words), StopListOrigin::dictionary);
        return run_pipeline(text, c, &stops);
      },
      py::arg("text"), py::arg("config") = PipelineConfig{}, py::arg("stop_words") = py::none());

  py::enum_<WeightingMode>(m, "WeightingMode")
      .value("binary", WeightingMode::binary)
      .value("raw_count", WeightingMode::raw_count)
      .value("normalized_tf", WeightingMode::normalized_tf)
      .value("tfidf", WeightingMode::tfidf);

  py::class_<Vocabulary>(m, "Vocabulary")
      .def_static(
          "build", [](const std::vector<TokenStream>& corpus) { return Vocabulary::build(corpus); }, py::arg("corpus"))
      .def("find", &Vocabulary::find, py::arg("token"))
      .def("token", &Vocabulary::token, py::arg("id"))
      .def("document_frequency", &Vocabulary::document_frequency, py::arg("id"))
      .def_property_readonly("tokens", &Vocabulary::tokens)
      .def_property_readonly("total_documents", &Vocabulary::total_documents)
      .def("__len__", &Vocabulary::size);

  py::class_<SparseVector>(m, "SparseVector")
      .def(py::init<>())
      .def_readwrite("entries", &SparseVector::entries)
      .def_readwrite("doc_length", &SparseVector::doc_length)
      .def("__repr__", [](const SparseVector& v) {
        return "SparseVector(" + py::repr(py::cast(v.entries)).cast<std::string>() +
               ", doc_length=" + std::to_string(v.doc_length) + ")";
      });

  m.def("vectorize", &vectorize, py::arg("tokens"), py::arg("vocabulary"), py::arg("weighting"));
  m.def("idf", &idf, py::arg("vocabulary"), py::arg("id"));

  py::class_<PosteriorReport>(m, "PosteriorReport")
      .def_readonly("labels", &PosteriorReport::labels)
      .def_readonly("log_scores", &PosteriorReport::log_scores)
      .def_readonly("posteriors", &PosteriorReport::posteriors)
      .def_readonly("degenerate_evidence", &PosteriorReport::degenerate_evidence)
      .def_property_readonly("predicted", &PosteriorReport::predicted_label);

  py::class_<ModelArchive>(m, "Model")
      .def_static(
          "train_text",
          [](const DocumentPairs& docs, const std::string& variant, const std::string& weighting, double alpha,
             const PipelineConfig& pipeline, std::optional<std::set<std::string>> stop_words) {
            TextTrainOptions opts;
            opts.variant = parse_variant(variant);
            opts.weighting = parse_weighting(weighting);
            opts.alpha = alpha;
            opts.pipeline = pipeline;
            if (stop_words) {
              opts.pipeline.stop_words = StopWordMode::dictionary;
              opts.dictionary = StopList(std::move(*stop_words), StopListOrigin::dictionary);
            }
            py::gil_scoped_release release;
            return train_text_model(to_corpus(docs), opts);
          },
          py::arg("documents"), py::arg("variant") = "multinomial", py::arg("weighting") = "raw_count",
          py::arg("alpha") = 1.0, py::arg("pipeline") = PipelineConfig{}, py::arg("stop_words") = py::none())
      .def_static(
          "train_categorical",
          [](std::vector<CategoricalSample> samples, std::vector<Label> labels, double alpha) {
            return train_categorical_model({std::move(labels), std::move(samples)}, alpha);
          },
          py::arg("samples"), py::arg("labels"), py::arg("alpha") = 1.0)
      .def_static(
          "train_gaussian",
          [](std::vector<RealVector> rows, std::vector<Label> labels) {
            return train_gaussian_model({std::move(labels), std::move(rows)});
          },
          py::arg("rows"), py::arg("labels"))
      .def_static("load", &load_archive, py::arg("path"))
      .def_static("from_json", &archive_from_json, py::arg("json"))
      .def("save", [](const ModelArchive& a, const std::filesystem::path& p) { save_archive(p, a); }, py::arg("path"))
      .def("to_json", &archive_to_json)
      .def_property_readonly("variant", [](const ModelArchive& a) { return std::string(to_string(variant_of(a.model))); })
      .def_property_readonly("labels", [](const ModelArchive& a) { return priors_of(a.model).labels(); })
      .def_property_readonly("priors", [](const ModelArchive& a) { return priors_of(a.model).probabilities(); })
      .def_property_readonly("vocabulary", [](const ModelArchive& a) -> std::optional<Vocabulary> {
        if (!a.featurizer) return std::nullopt;
        return a.featurizer->vocabulary;
      })
      .def(
          "with_priors",
          [](const ModelArchive& a, std::vector<double> p) {
            return ModelArchive{with_priors(a.model, std::move(p)), a.featurizer};
          },
          py::arg("priors"))
      .def(
          "featurize",
          [](const ModelArchive& a, std::string_view text) {
            if (!a.featurizer) throw InvalidArgument("only text models featurize raw text");
            return a.featurizer->featurize(text);
          },
          py::arg("text"))
      .def(
          "posterior", [](const ModelArchive& a, const py::handle& x) { return posterior_scores(a.model, to_input(a, x)); },
          py::arg("x"))
      .def(
          "predict", [](const ModelArchive& a, const py::handle& x) { return classify(a.model, to_input(a, x)); },
          py::arg("x"))
      .def(
          "evaluate",
          [](const ModelArchive& a, const py::list& inputs, const std::vector<Label>& truths) {
            if (a.featurizer) {
              std::vector<Document> docs;
              for (std::size_t i = 0; i < inputs.size(); ++i) docs.push_back({truths.at(i), inputs[i].cast<std::string>()});
              return report_dict(evaluate(a.model, *a.featurizer, LabeledCorpus::from_documents(std::move(docs))));
            }
            std::vector<ModelInput> xs;
            for (const auto& x : inputs) xs.push_back(to_input(a, x));
            return report_dict(evaluate(a.model, xs, truths));
          },
          py::arg("inputs"), py::arg("labels"));

  m.def(
      "load_corpus", [](const std::filesystem::path& p) { return to_pairs(load_corpus(p)); }, py::arg("path"));
  m.def(
      "parse_corpus", [](std::string_view text) { return to_pairs(parse_corpus(text)); }, py::arg("text"));
  m.def(
      "split_indices",
      [](std::size_t n, double fraction, std::uint64_t seed) {
        auto s = split_indices(n, fraction, seed);
        return std::make_pair(s.train, s.test);
      },
      py::arg("n"), py::arg("test_fraction"), py::arg("seed"));
}
