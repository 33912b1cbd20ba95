#pragma once

#include <cstddef>

#include "ircur/index_set.hpp"
#include "ircur/random.hpp"

namespace ircur {

/// Number of uniform draws for a dimension of size n at target rank r:
/// min(n, max(r, ceil(c · r · ln n))). Throws ParameterError unless
/// n ≥ 1, r ≥ 1 and c > 0.
std::size_t sample_count(std::size_t n, std::size_t r, double c);

/// Draws m indices uniformly with replacement from [0, n), then sorts and
/// deduplicates them. Throws ParameterError unless 1 ≤ m ≤ n.
IndexSet sample_indices(std::size_t n, std::size_t m, Rng& rng);

/// Same, on a fresh stream keyed by `seed`.
IndexSet sample_indices(std::size_t n, std::size_t m, RngSeed seed);

}  // namespace ircur
