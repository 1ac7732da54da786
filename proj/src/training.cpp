#include "nbayes/training.hpp"

#include "nbayes/error.hpp"

namespace nbayes {

void check_compatible(ModelVariant variant, WeightingMode weighting) {
  switch (variant) {
    case ModelVariant::bernoulli:
      if (weighting == WeightingMode::binary) return;
      break;
    case ModelVariant::multinomial:
      if (weighting != WeightingMode::binary) return;
      break;
    case ModelVariant::categorical:
    case ModelVariant::gaussian:
      throw InvalidArgument(std::string(to_string(variant)) + " models do not take text weighting");
  }
  throw InvalidArgument("weighting '" + std::string(to_string(weighting)) + "' cannot be used with the " +
                        std::string(to_string(variant)) + " model");
}

ModelArchive train_text_model(const LabeledCorpus& corpus, const TextTrainOptions& options) {
  check_compatible(options.variant, options.weighting);
  options.pipeline.validate();
  if (corpus.documents.empty()) throw InvalidArgument("empty corpus");

  std::vector<TokenStream> streams;
  streams.reserve(corpus.size());
  for (const auto& doc : corpus.documents) streams.push_back(tokenize(doc.text, options.pipeline));

  TextFeaturizer featurizer;
  featurizer.pipeline = options.pipeline;
  featurizer.weighting = options.weighting;
  switch (options.pipeline.stop_words) {
    case StopWordMode::none:
      break;
    case StopWordMode::dictionary:
      if (!options.dictionary) throw InvalidArgument("dictionary stop-word mode needs a stop list");
      featurizer.stops = options.dictionary;
      break;
    case StopWordMode::frequency_top_n:
      featurizer.stops = build_stop_list(streams, options.pipeline.stop_top_n);
      break;
  }

  for (auto& s : streams) s = apply_stages(std::move(s), featurizer.pipeline, featurizer.stops ? &*featurizer.stops : nullptr);
  featurizer.vocabulary = Vocabulary::build(streams);

  std::vector<SparseVector> vectors;
  vectors.reserve(streams.size());
  for (const auto& s : streams) vectors.push_back(vectorize(s, featurizer.vocabulary, featurizer.weighting));
  const std::vector<Label> labels = corpus.labels();

  if (options.variant == ModelVariant::bernoulli) {
    return {fit_bernoulli(vectors, labels, featurizer.vocabulary), std::move(featurizer)};
  }
  return {fit_multinomial(vectors, labels, featurizer.vocabulary, options.alpha), std::move(featurizer)};
}

ModelArchive train_categorical_model(const CategoricalCorpus& corpus, double alpha) {
  return {fit_categorical(corpus.samples, corpus.labels, alpha), std::nullopt};
}

ModelArchive train_gaussian_model(const NumericCorpus& corpus) {
  return {fit_gaussian(corpus.rows, corpus.labels), std::nullopt};
}

}  // namespace nbayes
