#pragma once

// Raw text -> token stream:
//   tokenize -> stop-word removal -> Porter stemming -> n-gram expansion
// Every stage after tokenization is optional and driven by PipelineConfig.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nbayes {

using TokenStream = std::vector<std::string>;

enum class StopWordMode { none, dictionary, frequency_top_n };

struct PipelineConfig {
  bool lowercase = true;
  bool strip_punctuation = true;
  StopWordMode stop_words = StopWordMode::none;
  std::size_t stop_top_n = 0;  // used only with StopWordMode::frequency_top_n
  bool stemming = false;
  std::size_t ngram_size = 1;

  /// Throws InvalidArgument when ngram_size is 0 or a top-n stop list asks for n = 0.
  void validate() const;

  friend bool operator==(const PipelineConfig&, const PipelineConfig&) = default;
};

enum class StopListOrigin { dictionary, frequency };

class StopList {
 public:
  StopList() = default;
  StopList(std::set<std::string> words, StopListOrigin origin, std::size_t top_n = 0);

  bool contains(const std::string& token) const { return words_.contains(token); }
  const std::set<std::string>& words() const noexcept { return words_; }
  StopListOrigin origin() const noexcept { return origin_; }
  /// n of a frequency-derived list; 0 for dictionary lists.
  std::size_t top_n() const noexcept { return top_n_; }
  std::size_t size() const noexcept { return words_.size(); }

  friend bool operator==(const StopList&, const StopList&) = default;

 private:
  std::set<std::string> words_;
  StopListOrigin origin_ = StopListOrigin::dictionary;
  std::size_t top_n_ = 0;
};

/// Splits on whitespace, then optionally trims punctuation from token edges and
/// lowercases. Tokens emptied by trimming are dropped.
TokenStream tokenize(std::string_view text, const PipelineConfig& config);

/// The n most frequent distinct tokens of the corpus. Ties at the cutoff go
/// to the lexicographically smaller token.
StopList build_stop_list(std::span<const TokenStream> corpus, std::size_t n);

/// One word per line; '#' comment lines and blank lines skipped, trailing
/// whitespace trimmed.
StopList load_stop_list(const std::filesystem::path& path);
StopList parse_stop_list(std::string_view contents);

TokenStream remove_stop_words(const TokenStream& stream, const StopList& stops);

TokenStream stem_tokens(const TokenStream& stream);

/// Space-joined sliding windows of n tokens.
TokenStream ngrams(const TokenStream& stream, std::size_t n);

/// Stages after tokenization, in pipeline order.
TokenStream apply_stages(TokenStream stream, const PipelineConfig& config, const StopList* stops);

TokenStream run_pipeline(std::string_view text, const PipelineConfig& config,
                         const StopList* stops = nullptr);

inline TokenStream run_pipeline(std::string_view text, const PipelineConfig& config,
                                const std::optional<StopList>& stops) {
  return run_pipeline(text, config, stops ? &*stops : nullptr);
}

}  // namespace nbayes
