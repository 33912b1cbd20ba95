#include "ircur/index_set.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "ircur/errors.hpp"

namespace ircur {

IndexSet::IndexSet(std::vector<std::size_t> indices, std::size_t bound)
    : indices_(std::move(indices)), bound_(bound) {
  if (indices_.empty()) throw ParameterError("IndexSet: empty selection");
  for (std::size_t k = 0; k < indices_.size(); ++k) {
    if (indices_[k] >= bound_)
      throw ParameterError("IndexSet: index " + std::to_string(indices_[k]) + " >= bound " +
                           std::to_string(bound_));
    if (k > 0 && indices_[k] <= indices_[k - 1])
      throw ParameterError("IndexSet: indices must be strictly increasing");
  }
}

IndexSet IndexSet::from_draws(std::vector<std::size_t> draws, std::size_t bound) {
  std::sort(draws.begin(), draws.end());
  draws.erase(std::unique(draws.begin(), draws.end()), draws.end());
  return IndexSet(std::move(draws), bound);
}

IndexSet IndexSet::full(std::size_t bound) {
  std::vector<std::size_t> v(bound);
  std::iota(v.begin(), v.end(), std::size_t{0});
  return IndexSet(std::move(v), bound);
}

bool IndexSet::contains(std::size_t i) const noexcept {
  return std::binary_search(indices_.begin(), indices_.end(), i);
}

}  // namespace ircur
