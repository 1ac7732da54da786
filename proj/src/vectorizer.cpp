#include "nbayes/vectorizer.hpp"

#include <cmath>
#include <ostream>
#include <unordered_set>
#include <utility>

#include "nbayes/error.hpp"

namespace nbayes {

Vocabulary::Vocabulary(std::vector<std::string> tokens, std::vector<std::uint64_t> document_frequency,
                       std::uint64_t total_documents)
    : tokens_(std::move(tokens)),
      document_frequency_(std::move(document_frequency)),
      total_documents_(total_documents) {
  if (tokens_.size() != document_frequency_.size()) {
    throw InvalidArgument("vocabulary token and document-frequency lists differ in length");
  }
  index_.reserve(tokens_.size());
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (tokens_[i].empty()) throw InvalidArgument("vocabulary contains an empty token");
    if (document_frequency_[i] < 1 || document_frequency_[i] > total_documents_) {
      throw InvalidArgument("document frequency of '" + tokens_[i] + "' outside [1, total_documents]");
    }
    if (!index_.emplace(tokens_[i], static_cast<TokenId>(i)).second) {
      throw InvalidArgument("duplicate vocabulary token '" + tokens_[i] + "'");
    }
  }
}

Vocabulary Vocabulary::build(std::span<const TokenStream> corpus) {
  if (corpus.empty()) throw InvalidArgument("cannot build a vocabulary from an empty corpus");
  Vocabulary vocab;
  vocab.total_documents_ = corpus.size();
  std::unordered_set<TokenId> seen_in_doc;
  for (const auto& doc : corpus) {
    seen_in_doc.clear();
    for (const auto& token : doc) {
      auto [it, inserted] = vocab.index_.try_emplace(token, static_cast<TokenId>(vocab.tokens_.size()));
      if (inserted) {
        vocab.tokens_.push_back(token);
        vocab.document_frequency_.push_back(0);
      }
      if (seen_in_doc.insert(it->second).second) ++vocab.document_frequency_[it->second];
    }
  }
  return vocab;
}

std::optional<TokenId> Vocabulary::find(const std::string& token) const {
  auto it = index_.find(token);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void Vocabulary::dump(std::ostream& out) const {
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    out << i << '\t' << tokens_[i] << '\t' << document_frequency_[i] << '\n';
  }
}

std::string_view to_string(WeightingMode mode) {
  switch (mode) {
    case WeightingMode::binary:
      return "binary";
    case WeightingMode::raw_count:
      return "raw_count";
    case WeightingMode::normalized_tf:
      return "normalized_tf";
    case WeightingMode::tfidf:
      return "tfidf";
  }
  return "unknown";
}

WeightingMode parse_weighting(std::string_view name) {
  if (name == "binary") return WeightingMode::binary;
  if (name == "raw_count") return WeightingMode::raw_count;
  if (name == "normalized_tf") return WeightingMode::normalized_tf;
  if (name == "tfidf") return WeightingMode::tfidf;
  throw InvalidArgument("unknown weighting '" + std::string(name) + "'");
}

double idf(const Vocabulary& vocab, TokenId id) {
  if (id >= vocab.size()) throw InvalidArgument("token id " + std::to_string(id) + " is not in the vocabulary");
  return std::log(static_cast<double>(vocab.total_documents()) /
                  static_cast<double>(vocab.document_frequency(id)));
}

SparseVector vectorize(const TokenStream& stream, const Vocabulary& vocab, WeightingMode mode) {
  SparseVector vec;
  vec.doc_length = stream.size();
  for (const auto& token : stream) {
    if (auto id = vocab.find(token)) vec.entries[*id] += 1.0;
  }

  switch (mode) {
    case WeightingMode::raw_count:
      break;
    case WeightingMode::binary:
      for (auto& [id, value] : vec.entries) value = 1.0;
      break;
    case WeightingMode::normalized_tf:
      for (auto& [id, value] : vec.entries) value /= static_cast<double>(vec.doc_length);
      break;
    case WeightingMode::tfidf:
      for (auto it = vec.entries.begin(); it != vec.entries.end();) {
        it->second = it->second / static_cast<double>(vec.doc_length) * idf(vocab, it->first);
        // a term present in every training document weighs zero
        it = it->second > 0.0 ? std::next(it) : vec.entries.erase(it);
      }
      break;
  }
  return vec;
}

}  // namespace nbayes
