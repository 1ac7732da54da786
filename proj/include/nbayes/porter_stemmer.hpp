#pragma once

#include <string>
#include <string_view>

namespace nbayes {

/// Porter (1980) suffix-stripping stemmer, steps 1a through 5b, without the
/// later revisions of the reference C release.
///
/// Input is expected to be lowercase ASCII letters. Anything else (digits,
/// apostrophes, uppercase, non-ASCII) is returned unchanged, as is a word the
/// rules would reduce to nothing ("s").
std::string porter_stem(std::string_view word);

}  // namespace nbayes
