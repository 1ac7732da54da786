#pragma once

// Model persistence: one JSON document with a format_version field. Only raw
// counts, sums and hyperparameters are written; conditionals are recomputed by
// the model constructors on load, so a reloaded model scores bit-identically.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "nbayes/models.hpp"
#include "nbayes/vectorizer.hpp"

namespace nbayes {

struct ModelArchive {
  static constexpr int kFormatVersion = 1;

  NaiveBayesModel model;
  /// Present for the text variants (bernoulli, multinomial).
  std::optional<TextFeaturizer> featurizer;
};

std::string archive_to_json(const ModelArchive& archive);
/// Throws FormatError on malformed JSON, a missing field, inconsistent tables
/// or an unsupported format_version.
ModelArchive archive_from_json(std::string_view json);

/// Throws IoError when the file cannot be written.
void save_archive(const std::filesystem::path& path, const ModelArchive& archive);
/// Throws IoError when the file cannot be read, FormatError when it is corrupt.
ModelArchive load_archive(const std::filesystem::path& path);

}  // namespace nbayes
