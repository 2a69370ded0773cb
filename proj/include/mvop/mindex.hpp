#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

namespace mvop {

/// Dimensions of the degree-n polynomial spaces in d variables.
struct SpaceDims {
  std::uint64_t r;        ///< dim of homogeneous degree n, binom(n+d-1, n)
  std::uint64_t R;        ///< dim of total degree <= n, binom(n+d, n)
  std::uint64_t delta_r;  ///< r_n - r_{n-1}, with r_{-1} = 0
};

/// Exact binomial coefficient; throws OverflowError if it does not fit in 64 bits.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

/// Throws DomainError for d < 1 or n < 0, OverflowError on 64-bit overflow.
SpaceDims dims(int d, int n);

class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> entries);

  int degree() const { return degree_; }
  int size() const { return static_cast<int>(entries_.size()); }
  int operator[](int i) const { return entries_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& entries() const { return entries_; }

  /// alpha + e_i
  MultiIndex incremented(int i) const;

  friend bool operator==(const MultiIndex& a, const MultiIndex& b) { return a.entries_ == b.entries_; }
  friend auto operator<=>(const MultiIndex& a, const MultiIndex& b) { return a.entries_ <=> b.entries_; }

 private:
  std::vector<int> entries_;
  int degree_ = 0;
};

/// Graded multi-index tables J_0, ..., J_N. Within a degree the order is
/// lexicographic descending (largest alpha_1 first, then alpha_2, ...).
///
/// All positions and coordinates are 0-based: level(n)[k] is alpha^{(n,k+1)}
/// and coordinate i refers to x_{i+1}.
class MultiIndexSet {
 public:
  MultiIndexSet(int d, int max_degree);

  int dim() const { return d_; }
  int max_degree() const { return max_degree_; }

  const std::vector<MultiIndex>& level(int n) const;
  /// r_n
  std::size_t level_size(int n) const { return level(n).size(); }
  /// R_n, number of indices of degree <= n. R_{-1} = 0.
  std::size_t total_size(int n) const;
  /// Offset of J_n in the graded enumeration, i.e. R_{n-1}.
  std::size_t offset(int n) const { return total_size(n - 1); }

  /// (n, k) such that level(n)[k] == alpha. Throws DomainError if absent.
  std::pair<int, std::size_t> position(const MultiIndex& alpha) const;

  /// Position q in J_{n+1} of level(n)[k] + e_i. Throws DomainError for
  /// n + 1 > max_degree, k >= r_n or i outside [0, d).
  std::size_t successor(int n, std::size_t k, int i) const;

  /// Degree of the j-th index in the graded enumeration.
  int degree_of(std::size_t flat) const;

  /// All indices of degree <= n in graded order.
  std::vector<MultiIndex> flattened(int n) const;

 private:
  int d_;
  int max_degree_;
  std::vector<std::vector<MultiIndex>> levels_;
  std::vector<std::size_t> cumulative_;
  std::map<MultiIndex, std::pair<int, std::size_t>> position_;
  // successor_[n][k * d + i]
  std::vector<std::vector<std::size_t>> successor_;
};

MultiIndexSet build_index_set(int d, int N);

}  // namespace mvop
