#include "nbayes/vectorizer.hpp"

namespace nbayes {

SparseVector TextFeaturizer::featurize(std::string_view text) const {
  return vectorize(tokens(text), vocabulary, weighting);
}

}  // namespace nbayes
