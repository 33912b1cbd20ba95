#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace ircur {

/// Identifies one reproducible random stream: (seed, stream) pairs that
/// differ in either field give statistically independent sequences.
struct RngSeed {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  /// A distinct stream derived from this one, e.g. one per trial or per
  /// generator stage.
  RngSeed child(std::uint64_t k) const noexcept;

  friend bool operator==(const RngSeed&, const RngSeed&) = default;
};

/// Portable random source.
///
/// The engine is std::mt19937_64 keyed through std::seed_seq, both of which
/// the standard pins bit-for-bit. The value mappings below are written out
/// instead of using <random> distributions, whose output is
/// implementation-defined, so a seed reproduces across toolchains.
class Rng {
public:
  explicit Rng(RngSeed seed);

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01();

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Unbiased uniform integer in [0, bound); bound must be positive.
  std::uint64_t below(std::uint64_t bound);

  /// Standard normal (Marsaglia polar method).
  double normal();

private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace ircur
