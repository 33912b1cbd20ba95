#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ircur {

/// Sorted, duplicate-free selection of row or column indices drawn from
/// [0, bound). Never empty.
class IndexSet {
public:
  /// Throws ParameterError if `indices` is empty, not strictly increasing,
  /// or reaches `bound`.
  IndexSet(std::vector<std::size_t> indices, std::size_t bound);

  /// Sorts and deduplicates arbitrary draws before validating.
  static IndexSet from_draws(std::vector<std::size_t> draws, std::size_t bound);

  /// {0, 1, ..., bound - 1}
  static IndexSet full(std::size_t bound);

  std::size_t size() const noexcept { return indices_.size(); }
  std::size_t bound() const noexcept { return bound_; }
  std::size_t operator[](std::size_t k) const noexcept { return indices_[k]; }
  std::span<const std::size_t> indices() const noexcept { return indices_; }

  auto begin() const noexcept { return indices_.begin(); }
  auto end() const noexcept { return indices_.end(); }

  bool contains(std::size_t i) const noexcept;

  friend bool operator==(const IndexSet&, const IndexSet&) = default;

private:
  std::vector<std::size_t> indices_;
  std::size_t bound_;
};

/// Tag selecting every row or every column in submatrix().
struct AllIndices {};
inline constexpr AllIndices all_indices{};

}  // namespace ircur
