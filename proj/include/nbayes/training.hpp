#pragma once

#include <optional>

#include "nbayes/archive.hpp"
#include "nbayes/evaluation.hpp"

namespace nbayes {

struct TextTrainOptions {
  PipelineConfig pipeline;
  /// Required when pipeline.stop_words is dictionary; ignored otherwise.
  std::optional<StopList> dictionary;
  ModelVariant variant = ModelVariant::multinomial;
  WeightingMode weighting = WeightingMode::raw_count;
  double alpha = 1.0;
};

/// binary pairs with bernoulli; raw_count, normalized_tf and tfidf with
/// multinomial. Throws InvalidArgument otherwise.
void check_compatible(ModelVariant variant, WeightingMode weighting);

/// Tokenizes the corpus, derives the stop list (dictionary or top-n), builds
/// the vocabulary on the fully processed streams and fits the chosen model.
ModelArchive train_text_model(const LabeledCorpus& corpus, const TextTrainOptions& options);
ModelArchive train_categorical_model(const CategoricalCorpus& corpus, double alpha);
ModelArchive train_gaussian_model(const NumericCorpus& corpus);

}  // namespace nbayes
