#include "nbayes/text_pipeline.hpp"

#include <locale.h>
#include <wctype.h>

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <utility>

#include "nbayes/error.hpp"
#include "nbayes/porter_stemmer.hpp"

namespace nbayes {
namespace {

// Character classification for non-ASCII code points goes through the C.UTF-8
// locale; if the platform lacks it, non-ASCII characters are left untouched.
class Ctype {
 public:
  static const Ctype& instance() {
    static const Ctype ctype;
    return ctype;
  }

  bool is_space(char32_t cp) const {
    if (cp < 0x80) return cp == ' ' || (cp >= '\t' && cp <= '\r');
    return locale_ != nullptr && iswspace_l(static_cast<wint_t>(cp), locale_);
  }

  bool is_punct(char32_t cp) const {
    if (cp < 0x80) return (cp >= '!' && cp <= '/') || (cp >= ':' && cp <= '@') ||
                          (cp >= '[' && cp <= '`') || (cp >= '{' && cp <= '~');
    return locale_ != nullptr && iswpunct_l(static_cast<wint_t>(cp), locale_);
  }

  char32_t to_lower(char32_t cp) const {
    if (cp < 0x80) return (cp >= 'A' && cp <= 'Z') ? cp + ('a' - 'A') : cp;
    if (locale_ == nullptr) return cp;
    return static_cast<char32_t>(towlower_l(static_cast<wint_t>(cp), locale_));
  }

  Ctype(const Ctype&) = delete;
  Ctype& operator=(const Ctype&) = delete;

 private:
  Ctype() {
    locale_ = newlocale(LC_CTYPE_MASK, "C.UTF-8", static_cast<locale_t>(nullptr));
    if (locale_ == nullptr) locale_ = newlocale(LC_CTYPE_MASK, "C.utf8", static_cast<locale_t>(nullptr));
  }
  ~Ctype() {
    if (locale_ != nullptr) freelocale(locale_);
  }

  locale_t locale_ = nullptr;
};

// One decoded code point plus the bytes it came from. Invalid sequences decode
// to U+FFFD one byte at a time and keep their original bytes.
struct Unit {
  char32_t cp;
  std::string_view bytes;
};

std::vector<Unit> decode_utf8(std::string_view text) {
  std::vector<Unit> units;
  units.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    const auto lead = static_cast<unsigned char>(text[i]);
    std::size_t len = 1;
    char32_t cp = 0xFFFD;
    if (lead < 0x80) {
      cp = lead;
    } else {
      std::size_t need = 0;
      char32_t min = 0;
      if ((lead & 0xE0) == 0xC0) {
        need = 1, cp = lead & 0x1F, min = 0x80;
      } else if ((lead & 0xF0) == 0xE0) {
        need = 2, cp = lead & 0x0F, min = 0x800;
      } else if ((lead & 0xF8) == 0xF0) {
        need = 3, cp = lead & 0x07, min = 0x10000;
      }
      bool ok = need > 0;
      for (std::size_t k = 1; ok && k <= need; ++k) {
        if (i + k >= text.size()) {
          ok = false;
          break;
        }
        const auto cont = static_cast<unsigned char>(text[i + k]);
        if ((cont & 0xC0) != 0x80) {
          ok = false;
          break;
        }
        cp = (cp << 6) | (cont & 0x3F);
      }
      if (ok && cp >= min && cp <= 0x10FFFF && !(cp >= 0xD800 && cp <= 0xDFFF)) {
        len = need + 1;
      } else {
        cp = 0xFFFD;
      }
    }
    units.push_back({cp, text.substr(i, len)});
    i += len;
  }
  return units;
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

std::string_view trim_right(std::string_view s) {
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '\n' ||
                        s.back() == '\v' || s.back() == '\f')) {
    s.remove_suffix(1);
  }
  return s;
}

}  // namespace

void PipelineConfig::validate() const {
  if (ngram_size == 0) throw InvalidArgument("ngram_size must be at least 1");
  if (stop_words == StopWordMode::frequency_top_n && stop_top_n == 0) {
    throw InvalidArgument("frequency stop list requires n >= 1");
  }
}

StopList::StopList(std::set<std::string> words, StopListOrigin origin, std::size_t top_n)
    : words_(std::move(words)), origin_(origin), top_n_(top_n) {
  if (words_.contains(std::string{})) throw InvalidArgument("stop list contains an empty word");
}

TokenStream tokenize(std::string_view text, const PipelineConfig& config) {
  const Ctype& ctype = Ctype::instance();
  const std::vector<Unit> units = decode_utf8(text);

  TokenStream tokens;
  std::size_t i = 0;
  while (i < units.size()) {
    while (i < units.size() && ctype.is_space(units[i].cp)) ++i;
    std::size_t begin = i;
    while (i < units.size() && !ctype.is_space(units[i].cp)) ++i;
    std::size_t end = i;

    if (config.strip_punctuation) {
      while (begin < end && ctype.is_punct(units[begin].cp)) ++begin;
      while (end > begin && ctype.is_punct(units[end - 1].cp)) --end;
    }
    if (begin == end) continue;

    std::string token;
    for (std::size_t k = begin; k < end; ++k) {
      const Unit& u = units[k];
      const char32_t lowered = config.lowercase ? ctype.to_lower(u.cp) : u.cp;
      if (lowered == u.cp) {
        token.append(u.bytes);
      } else {
        append_utf8(token, lowered);
      }
    }
    tokens.push_back(std::move(token));
  }
  return tokens;
}

StopList build_stop_list(std::span<const TokenStream> corpus, std::size_t n) {
  if (n == 0) throw InvalidArgument("stop list size n must be at least 1");
  if (corpus.empty()) throw InvalidArgument("cannot build a stop list from an empty corpus");

  std::map<std::string, std::size_t> counts;
  for (const auto& doc : corpus) {
    for (const auto& token : doc) ++counts[token];
  }

  std::vector<std::pair<std::string, std::size_t>> ranked(counts.begin(), counts.end());
  // counts is key-ordered, so a stable sort on frequency keeps ties ascending.
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });

  std::set<std::string> words;
  for (std::size_t k = 0; k < ranked.size() && k < n; ++k) words.insert(ranked[k].first);
  return StopList(std::move(words), StopListOrigin::frequency, n);
}

StopList parse_stop_list(std::string_view contents) {
  std::set<std::string> words;
  std::size_t pos = 0;
  while (pos <= contents.size()) {
    std::size_t eol = contents.find('\n', pos);
    if (eol == std::string_view::npos) eol = contents.size();
    std::string_view line = trim_right(contents.substr(pos, eol - pos));
    pos = eol + 1;
    if (line.empty() || line.front() == '#') continue;
    words.emplace(line);
  }
  return StopList(std::move(words), StopListOrigin::dictionary);
}

StopList load_stop_list(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open stop word file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_stop_list(buffer.str());
}

TokenStream remove_stop_words(const TokenStream& stream, const StopList& stops) {
  TokenStream kept;
  kept.reserve(stream.size());
  std::copy_if(stream.begin(), stream.end(), std::back_inserter(kept),
               [&](const std::string& t) { return !stops.contains(t); });
  return kept;
}

TokenStream stem_tokens(const TokenStream& stream) {
  TokenStream stemmed;
  stemmed.reserve(stream.size());
  for (const auto& token : stream) stemmed.push_back(porter_stem(token));
  return stemmed;
}

TokenStream ngrams(const TokenStream& stream, std::size_t n) {
  if (n == 0) throw InvalidArgument("n-gram size must be at least 1");
  if (n == 1) return stream;
  TokenStream grams;
  if (stream.size() < n) return grams;
  grams.reserve(stream.size() - n + 1);
  for (std::size_t i = 0; i + n <= stream.size(); ++i) {
    std::string gram = stream[i];
    for (std::size_t k = 1; k < n; ++k) {
      gram.push_back(' ');
      gram += stream[i + k];
    }
    grams.push_back(std::move(gram));
  }
  return grams;
}

TokenStream apply_stages(TokenStream stream, const PipelineConfig& config, const StopList* stops) {
  config.validate();
  if (config.stop_words != StopWordMode::none) {
    if (stops == nullptr) throw InvalidArgument("pipeline requires a stop list but none was supplied");
    stream = remove_stop_words(stream, *stops);
  }
  if (config.stemming) stream = stem_tokens(stream);
  if (config.ngram_size > 1) stream = ngrams(stream, config.ngram_size);
  return stream;
}

TokenStream run_pipeline(std::string_view text, const PipelineConfig& config, const StopList* stops) {
  config.validate();
  if (config.stop_words != StopWordMode::none && stops == nullptr) {
    throw InvalidArgument("pipeline requires a stop list but none was supplied");
  }
  return apply_stages(tokenize(text, config), config, stops);
}

}  // namespace nbayes
