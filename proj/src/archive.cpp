#include "nbayes/archive.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "nbayes/error.hpp"

namespace nbayes {
namespace {

using nlohmann::json;

std::string_view stop_mode_name(StopWordMode mode) {
  switch (mode) {
    case StopWordMode::none:
      return "none";
    case StopWordMode::dictionary:
      return "dictionary";
    case StopWordMode::frequency_top_n:
      return "frequency";
  }
  return "none";
}

StopWordMode parse_stop_mode(const std::string& name) {
  if (name == "none") return StopWordMode::none;
  if (name == "dictionary") return StopWordMode::dictionary;
  if (name == "frequency") return StopWordMode::frequency_top_n;
  throw FormatError("unknown stop_words mode '" + name + "'");
}

// Counts must be stored as non-negative integers; get<uint64_t> alone would wrap -1.
const json& unsigned_counts(const json& j) {
  if (j.is_array()) {
    for (const json& e : j) unsigned_counts(e);
  } else if (!j.is_number_unsigned()) {
    throw FormatError("model archive count is not a non-negative integer: " + j.dump());
  }
  return j;
}

json priors_to_json(const ClassPriors& priors) {
  json j = {{"labels", priors.labels()}, {"counts", priors.counts()}};
  if (priors.overridden()) j["probabilities"] = priors.probabilities();
  return j;
}

ClassPriors priors_from_json(const json& j) {
  ClassPriors priors = ClassPriors::from_counts(j.at("labels").get<std::vector<Label>>(),
                                                unsigned_counts(j.at("counts")).get<std::vector<std::uint64_t>>());
  if (j.contains("probabilities")) priors = priors.with_probabilities(j.at("probabilities").get<std::vector<double>>());
  return priors;
}

json featurizer_to_json(const TextFeaturizer& f) {
  json j;
  j["pipeline"] = {{"lowercase", f.pipeline.lowercase},
                   {"strip_punctuation", f.pipeline.strip_punctuation},
                   {"stop_words", stop_mode_name(f.pipeline.stop_words)},
                   {"stop_top_n", f.pipeline.stop_top_n},
                   {"stemming", f.pipeline.stemming},
                   {"ngram_size", f.pipeline.ngram_size}};
  if (f.stops) {
    j["stop_list"] = {{"origin", f.stops->origin() == StopListOrigin::dictionary ? "dictionary" : "frequency"},
                      {"top_n", f.stops->top_n()},
                      {"words", f.stops->words()}};
  } else {
    j["stop_list"] = nullptr;
  }
  j["weighting"] = to_string(f.weighting);
  j["vocabulary"] = {{"tokens", f.vocabulary.tokens()},
                     {"document_frequency", f.vocabulary.document_frequencies()},
                     {"total_documents", f.vocabulary.total_documents()}};
  return j;
}

TextFeaturizer featurizer_from_json(const json& j) {
  TextFeaturizer f;
  const json& p = j.at("pipeline");
  f.pipeline.lowercase = p.at("lowercase").get<bool>();
  f.pipeline.strip_punctuation = p.at("strip_punctuation").get<bool>();
  f.pipeline.stop_words = parse_stop_mode(p.at("stop_words").get<std::string>());
  f.pipeline.stop_top_n = p.at("stop_top_n").get<std::size_t>();
  f.pipeline.stemming = p.at("stemming").get<bool>();
  f.pipeline.ngram_size = p.at("ngram_size").get<std::size_t>();
  f.pipeline.validate();

  const json& s = j.at("stop_list");
  if (!s.is_null()) {
    const std::string origin = s.at("origin").get<std::string>();
    if (origin != "dictionary" && origin != "frequency") throw FormatError("unknown stop list origin '" + origin + "'");
    f.stops = StopList(s.at("words").get<std::set<std::string>>(),
                       origin == "dictionary" ? StopListOrigin::dictionary : StopListOrigin::frequency,
                       unsigned_counts(s.at("top_n")).get<std::size_t>());
  }
  if (f.pipeline.stop_words != StopWordMode::none && !f.stops) {
    throw FormatError("pipeline uses stop words but the archive has no stop list");
  }
  f.weighting = parse_weighting(j.at("weighting").get<std::string>());

  const json& v = j.at("vocabulary");
  f.vocabulary = Vocabulary(v.at("tokens").get<std::vector<std::string>>(),
                            unsigned_counts(v.at("document_frequency")).get<std::vector<std::uint64_t>>(),
                            unsigned_counts(v.at("total_documents")).get<std::uint64_t>());
  return f;
}

json parameters_to_json(const NaiveBayesModel& model) {
  struct Visitor {
    json operator()(const CategoricalModel& m) const {
      json positions = json::array();
      for (const auto& pos : m.positions()) positions.push_back({{"values", pos.values}, {"counts", pos.counts}});
      return {{"alpha", m.alpha()}, {"class_totals", m.class_totals()}, {"positions", positions}};
    }
    json operator()(const BernoulliModel& m) const {
      return {{"document_counts", m.document_counts()}, {"class_documents", m.class_documents()}};
    }
    json operator()(const MultinomialModel& m) const {
      return {{"alpha", m.alpha()}, {"term_sums", m.term_sums()}, {"class_totals", m.class_totals()}};
    }
    json operator()(const GaussianModel& m) const { return {{"means", m.means()}, {"m2", m.m2()}}; }
  };
  return std::visit(Visitor{}, model);
}

NaiveBayesModel model_from_json(ModelVariant variant, ClassPriors priors, const json& p) {
  switch (variant) {
    case ModelVariant::categorical: {
      std::vector<CategoricalModel::Position> positions;
      for (const json& pos : p.at("positions")) {
        positions.push_back({pos.at("values").get<std::vector<std::string>>(),
                             unsigned_counts(pos.at("counts")).get<std::vector<std::vector<std::uint64_t>>>()});
      }
      return CategoricalModel(std::move(priors), std::move(positions),
                              unsigned_counts(p.at("class_totals")).get<std::vector<std::uint64_t>>(), p.at("alpha").get<double>());
    }
    case ModelVariant::bernoulli:
      return BernoulliModel(std::move(priors), unsigned_counts(p.at("document_counts")).get<std::vector<std::vector<std::uint64_t>>>(),
                            unsigned_counts(p.at("class_documents")).get<std::vector<std::uint64_t>>());
    case ModelVariant::multinomial:
      return MultinomialModel(std::move(priors), p.at("term_sums").get<std::vector<std::vector<double>>>(),
                              p.at("class_totals").get<std::vector<double>>(), p.at("alpha").get<double>());
    case ModelVariant::gaussian:
      return GaussianModel(std::move(priors), p.at("means").get<std::vector<std::vector<double>>>(),
                           p.at("m2").get<std::vector<std::vector<double>>>());
  }
  throw FormatError("unknown variant");
}

std::size_t model_vocabulary_size(const NaiveBayesModel& model) {
  if (const auto* b = std::get_if<BernoulliModel>(&model)) return b->vocabulary_size();
  if (const auto* m = std::get_if<MultinomialModel>(&model)) return m->vocabulary_size();
  return 0;
}

bool is_text_variant(ModelVariant v) { return v == ModelVariant::bernoulli || v == ModelVariant::multinomial; }

}  // namespace

std::string archive_to_json(const ModelArchive& archive) {
  const ModelVariant variant = variant_of(archive.model);
  if (is_text_variant(variant) != archive.featurizer.has_value()) {
    throw InvalidArgument("text variants need a featurizer and feature-tuple variants must not have one");
  }
  json j;
  j["format_version"] = ModelArchive::kFormatVersion;
  j["variant"] = to_string(variant);
  j["priors"] = priors_to_json(priors_of(archive.model));
  j["featurizer"] = archive.featurizer ? featurizer_to_json(*archive.featurizer) : json(nullptr);
  j["parameters"] = parameters_to_json(archive.model);
  return j.dump() + "\n";
}

ModelArchive archive_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw FormatError(std::string("model archive is not valid JSON: ") + e.what());
  }

  try {
    if (!j.is_object() || !j.contains("format_version")) throw FormatError("model archive has no format_version");
    const int version = j.at("format_version").get<int>();
    if (version != ModelArchive::kFormatVersion) {
      throw FormatError("unsupported model archive format_version " + std::to_string(version) + " (expected " +
                        std::to_string(ModelArchive::kFormatVersion) + ")");
    }
    const ModelVariant variant = parse_variant(j.at("variant").get<std::string>());
    ModelArchive archive{model_from_json(variant, priors_from_json(j.at("priors")), j.at("parameters")), std::nullopt};

    const json& f = j.at("featurizer");
    if (is_text_variant(variant)) {
      if (f.is_null()) throw FormatError("text model archive has no featurizer");
      archive.featurizer = featurizer_from_json(f);
      if (archive.featurizer->vocabulary.size() != model_vocabulary_size(archive.model)) {
        throw FormatError("vocabulary size does not match the model tables");
      }
    } else if (!f.is_null()) {
      throw FormatError(std::string(to_string(variant)) + " archive must not carry a featurizer");
    }
    return archive;
  } catch (const FormatError&) {
    throw;
  } catch (const json::exception& e) {
    throw FormatError(std::string("corrupt model archive: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("corrupt model archive: ") + e.what());
  } catch (const std::out_of_range& e) {
    throw FormatError(std::string("corrupt model archive: ") + e.what());
  }
}

void save_archive(const std::filesystem::path& path, const ModelArchive& archive) {
  const std::string text = archive_to_json(archive);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open model file for writing: " + path.string());
  out << text;
  out.flush();
  if (!out) throw IoError("error writing model file: " + path.string());
}

ModelArchive load_archive(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open model file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return archive_from_json(buffer.str());
}

}  // namespace nbayes
