#include "mvop/mindex.hpp"

#include <numeric>
#include <string>

#include "mvop/errors.hpp"

namespace mvop {

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t c = 1;
  for (std::uint64_t j = 1; j <= k; ++j) {
    // c * (n - k + j) / j stays integral; divide out the gcd first so the
    // product only overflows when the result itself does.
    const std::uint64_t g = std::gcd(c, j);
    const std::uint64_t factor = (n - k + j) / (j / g);
    std::uint64_t next = 0;
    if (__builtin_mul_overflow(c / g, factor, &next))
      throw OverflowError("binomial(" + std::to_string(n) + ", " + std::to_string(k) +
                          ") overflows 64 bits");
    c = next;
  }
  return c;
}

SpaceDims dims(int d, int n) {
  if (d < 1) throw DomainError("dimension must be >= 1");
  if (n < 0) throw DomainError("degree must be >= 0");
  const auto ud = static_cast<std::uint64_t>(d);
  const auto un = static_cast<std::uint64_t>(n);
  SpaceDims out{};
  out.r = binomial(un + ud - 1, un);
  out.R = binomial(un + ud, un);
  const std::uint64_t r_prev = n == 0 ? 0 : binomial(un + ud - 2, un - 1);
  out.delta_r = out.r - r_prev;
  return out;
}

MultiIndex::MultiIndex(std::vector<int> entries) : entries_(std::move(entries)) {
  for (int e : entries_) {
    if (e < 0) throw DomainError("multi-index entries must be nonnegative");
    degree_ += e;
  }
}

MultiIndex MultiIndex::incremented(int i) const {
  if (i < 0 || i >= size()) throw DomainError("coordinate out of range");
  auto e = entries_;
  ++e[static_cast<std::size_t>(i)];
  return MultiIndex(std::move(e));
}

namespace {

// Compositions of n into `parts` nonnegative parts, first part descending.
void compositions(int n, int parts, std::vector<int>& prefix, std::vector<MultiIndex>& out) {
  if (parts == 1) {
    prefix.push_back(n);
    out.emplace_back(prefix);
    prefix.pop_back();
    return;
  }
  for (int first = n; first >= 0; --first) {
    prefix.push_back(first);
    compositions(n - first, parts - 1, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

MultiIndexSet::MultiIndexSet(int d, int max_degree) : d_(d), max_degree_(max_degree) {
  if (d < 1) throw DomainError("dimension must be >= 1");
  if (max_degree < 0) throw DomainError("max degree must be >= 0");
  // Fails loudly if R_N does not fit.
  (void)dims(d, max_degree);

  levels_.resize(static_cast<std::size_t>(max_degree) + 1);
  std::size_t running = 0;
  for (int n = 0; n <= max_degree; ++n) {
    std::vector<int> prefix;
    compositions(n, d, prefix, levels_[static_cast<std::size_t>(n)]);
    const auto& lvl = levels_[static_cast<std::size_t>(n)];
    for (std::size_t k = 0; k < lvl.size(); ++k) position_.emplace(lvl[k], std::make_pair(n, k));
    running += lvl.size();
    cumulative_.push_back(running);
  }

  successor_.resize(static_cast<std::size_t>(max_degree));
  for (int n = 0; n < max_degree; ++n) {
    const auto& lvl = levels_[static_cast<std::size_t>(n)];
    auto& table = successor_[static_cast<std::size_t>(n)];
    table.resize(lvl.size() * static_cast<std::size_t>(d));
    for (std::size_t k = 0; k < lvl.size(); ++k)
      for (int i = 0; i < d; ++i)
        table[k * static_cast<std::size_t>(d) + static_cast<std::size_t>(i)] =
            position_.at(lvl[k].incremented(i)).second;
  }
}

const std::vector<MultiIndex>& MultiIndexSet::level(int n) const {
  if (n < 0 || n > max_degree_) throw DomainError("degree " + std::to_string(n) + " outside index set");
  return levels_[static_cast<std::size_t>(n)];
}

std::size_t MultiIndexSet::total_size(int n) const {
  if (n < 0) return 0;
  if (n > max_degree_) throw DomainError("degree " + std::to_string(n) + " outside index set");
  return cumulative_[static_cast<std::size_t>(n)];
}

std::pair<int, std::size_t> MultiIndexSet::position(const MultiIndex& alpha) const {
  auto it = position_.find(alpha);
  if (it == position_.end()) throw DomainError("multi-index not in set");
  return it->second;
}

std::size_t MultiIndexSet::successor(int n, std::size_t k, int i) const {
  if (n < 0 || n + 1 > max_degree_) throw DomainError("successor: degree out of range");
  if (i < 0 || i >= d_) throw DomainError("successor: coordinate out of range");
  if (k >= level_size(n)) throw DomainError("successor: position out of range");
  return successor_[static_cast<std::size_t>(n)][k * static_cast<std::size_t>(d_) + static_cast<std::size_t>(i)];
}

int MultiIndexSet::degree_of(std::size_t flat) const {
  for (int n = 0; n <= max_degree_; ++n)
    if (flat < cumulative_[static_cast<std::size_t>(n)]) return n;
  throw DomainError("flat index outside index set");
}

std::vector<MultiIndex> MultiIndexSet::flattened(int n) const {
  std::vector<MultiIndex> out;
  out.reserve(total_size(n));
  for (int m = 0; m <= n; ++m) out.insert(out.end(), level(m).begin(), level(m).end());
  return out;
}

MultiIndexSet build_index_set(int d, int N) { return MultiIndexSet(d, N); }

}  // namespace mvop
