#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "nbayes/text_pipeline.hpp"

namespace nbayes {

using TokenId = std::uint32_t;

/// Dense 0-based ids for every distinct training token, with per-token
/// document frequencies.
class Vocabulary {
 public:
  Vocabulary() = default;

  /// Rebuilds a vocabulary from stored parts (tokens listed in id order).
  /// Throws InvalidArgument if a document frequency falls outside
  /// [1, total_documents] or a token repeats.
  Vocabulary(std::vector<std::string> tokens, std::vector<std::uint64_t> document_frequency,
             std::uint64_t total_documents);

  /// Ids follow first appearance, scanning documents then positions.
  static Vocabulary build(std::span<const TokenStream> corpus);

  std::optional<TokenId> find(const std::string& token) const;
  const std::string& token(TokenId id) const { return tokens_.at(id); }
  std::uint64_t document_frequency(TokenId id) const { return document_frequency_.at(id); }
  std::uint64_t total_documents() const noexcept { return total_documents_; }
  std::size_t size() const noexcept { return tokens_.size(); }

  const std::vector<std::string>& tokens() const noexcept { return tokens_; }
  const std::vector<std::uint64_t>& document_frequencies() const noexcept { return document_frequency_; }

  /// "id<TAB>token<TAB>document_frequency" per line, ids ascending.
  void dump(std::ostream& out) const;

 private:
  std::vector<std::string> tokens_;
  std::vector<std::uint64_t> document_frequency_;
  std::unordered_map<std::string, TokenId> index_;
  std::uint64_t total_documents_ = 0;
};

enum class WeightingMode { binary, raw_count, normalized_tf, tfidf };

std::string_view to_string(WeightingMode mode);
/// Throws InvalidArgument on an unknown name.
WeightingMode parse_weighting(std::string_view name);

/// A vectorized document. Only strictly positive values are stored.
/// doc_length counts every token of the source stream, out-of-vocabulary
/// ones included.
struct SparseVector {
  std::map<TokenId, double> entries;
  std::size_t doc_length = 0;

  double value(TokenId id) const {
    auto it = entries.find(id);
    return it == entries.end() ? 0.0 : it->second;
  }
  bool empty() const noexcept { return entries.empty(); }

  friend bool operator==(const SparseVector&, const SparseVector&) = default;
};

/// Tokens missing from the vocabulary are skipped.
SparseVector vectorize(const TokenStream& stream, const Vocabulary& vocab, WeightingMode mode);

/// ln(total_documents / document_frequency(id)).
double idf(const Vocabulary& vocab, TokenId id);

/// Pipeline + vocabulary + weighting bundled: everything needed to turn raw
/// text into the feature vector a trained text model expects.
struct TextFeaturizer {
  PipelineConfig pipeline;
  std::optional<StopList> stops;
  Vocabulary vocabulary;
  WeightingMode weighting = WeightingMode::raw_count;

  TokenStream tokens(std::string_view text) const { return run_pipeline(text, pipeline, stops); }
  SparseVector featurize(std::string_view text) const;
};

}  // namespace nbayes
