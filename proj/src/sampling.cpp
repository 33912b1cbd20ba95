#include "ircur/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "ircur/errors.hpp"

namespace ircur {

std::size_t sample_count(std::size_t n, std::size_t r, double c) {
  if (n == 0 || r == 0 || !(c > 0.0))
    throw ParameterError("sample_count: need n >= 1, r >= 1, c > 0");
  const double raw = std::ceil(c * static_cast<double>(r) * std::log(static_cast<double>(n)));
  const auto drawn = raw >= static_cast<double>(n) ? n : static_cast<std::size_t>(raw);
  return std::min(n, std::max(r, drawn));
}

IndexSet sample_indices(std::size_t n, std::size_t m, Rng& rng) {
  if (m == 0 || m > n)
    throw ParameterError("sample_indices: need 1 <= m <= n, got m=" + std::to_string(m) +
                         ", n=" + std::to_string(n));
  std::vector<std::size_t> draws(m);
  for (auto& d : draws) d = static_cast<std::size_t>(rng.below(n));
  return IndexSet::from_draws(std::move(draws), n);
}

IndexSet sample_indices(std::size_t n, std::size_t m, RngSeed seed) {
  Rng rng(seed);
  return sample_indices(n, m, rng);
}

}  // namespace ircur
