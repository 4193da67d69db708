#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "pstab/errors.hpp"

namespace pstab {

/// C(n, k); zero when k > n.
inline std::uint64_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  std::uint64_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

/// A strictly increasing tuple of 1-based indices drawn from [1, n].
///
/// Index sets address the rows and columns of compound matrices: the k-subsets
/// of [n] are numbered 1..C(n,k) in lexicographic order and `rank()` returns
/// that number. The empty set is allowed (it is the pivot set of a degenerate
/// Sylvester identity) and has rank 1.
class IndexSet {
 public:
  IndexSet() = default;

  IndexSet(std::size_t n, std::vector<std::size_t> indices)
      : n_(n), indices_(std::move(indices)) {
    for (std::size_t p = 0; p < indices_.size(); ++p) {
      if (indices_[p] < 1 || indices_[p] > n_)
        throw ArgumentError("index " + std::to_string(indices_[p]) + " outside [1, " +
                            std::to_string(n_) + "]");
      if (p > 0 && indices_[p] <= indices_[p - 1])
        throw ArgumentError("index set must be strictly increasing");
    }
  }

  static IndexSet full(std::size_t n) { return range(n, 1, n); }

  /// {first, first+1, ..., last}; empty when last < first.
  static IndexSet range(std::size_t n, std::size_t first, std::size_t last) {
    std::vector<std::size_t> v;
    for (std::size_t i = first; i <= last; ++i) v.push_back(i);
    return IndexSet(n, std::move(v));
  }

  static IndexSet from_mask(std::size_t n, std::uint64_t mask) {
    std::vector<std::size_t> v;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (std::uint64_t{1} << i)) v.push_back(i + 1);
    return IndexSet(n, std::move(v));
  }

  std::size_t ambient() const { return n_; }
  std::size_t size() const { return indices_.size(); }
  bool empty() const { return indices_.empty(); }
  const std::vector<std::size_t>& indices() const { return indices_; }
  std::size_t operator[](std::size_t p) const { return indices_[p]; }
  auto begin() const { return indices_.begin(); }
  auto end() const { return indices_.end(); }

  bool contains(std::size_t i) const {
    for (auto v : indices_)
      if (v == i) return true;
    return false;
  }

  std::uint64_t mask() const {
    std::uint64_t m = 0;
    for (auto v : indices_) m |= std::uint64_t{1} << (v - 1);
    return m;
  }

  /// 1-based lexicographic position among all same-size subsets of [n].
  std::uint64_t rank() const {
    const std::size_t k = indices_.size();
    std::uint64_t r = 1;
    std::size_t prev = 0;
    for (std::size_t p = 0; p < k; ++p) {
      for (std::size_t v = prev + 1; v < indices_[p]; ++v) r += binomial(n_ - v, k - p - 1);
      prev = indices_[p];
    }
    return r;
  }

  /// Same set with `i` inserted in sorted position.
  IndexSet with(std::size_t i) const {
    std::vector<std::size_t> v;
    bool placed = false;
    for (auto x : indices_) {
      if (!placed && i < x) {
        v.push_back(i);
        placed = true;
      }
      v.push_back(x);
    }
    if (!placed) v.push_back(i);
    return IndexSet(n_, std::move(v));
  }

  IndexSet without(std::size_t i) const {
    std::vector<std::size_t> v;
    for (auto x : indices_)
      if (x != i) v.push_back(x);
    return IndexSet(n_, std::move(v));
  }

  std::string str() const {
    std::string s = "{";
    for (std::size_t p = 0; p < indices_.size(); ++p) {
      if (p) s += ",";
      s += std::to_string(indices_[p]);
    }
    return s + "}";
  }

  friend bool operator==(const IndexSet&, const IndexSet&) = default;
  friend auto operator<=>(const IndexSet&, const IndexSet&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::size_t> indices_;
};

inline std::uint64_t lex_rank(const IndexSet& s) { return s.rank(); }

/// Inverse of lex_rank: the rank-th k-subset of [n] (rank is 1-based).
inline IndexSet lex_unrank(std::size_t n, std::size_t k, std::uint64_t rank) {
  if (k > n) throw ArgumentError("subset size exceeds dimension");
  const std::uint64_t total = binomial(n, k);
  if (rank < 1 || rank > total)
    throw ArgumentError("rank " + std::to_string(rank) + " outside [1, " +
                        std::to_string(total) + "]");
  std::vector<std::size_t> v;
  std::uint64_t remaining = rank - 1;
  std::size_t next = 1;
  for (std::size_t p = 0; p < k; ++p) {
    for (;; ++next) {
      const std::uint64_t block = binomial(n - next, k - p - 1);
      if (remaining < block) break;
      remaining -= block;
    }
    v.push_back(next++);
  }
  return IndexSet(n, std::move(v));
}

/// All k-subsets of [n] in lexicographic (rank) order.
inline std::vector<IndexSet> k_subsets(std::size_t n, std::size_t k) {
  std::vector<IndexSet> out;
  if (k > n) return out;
  out.reserve(binomial(n, k));
  std::vector<std::size_t> cur(k);
  for (std::size_t p = 0; p < k; ++p) cur[p] = p + 1;
  while (true) {
    out.emplace_back(n, cur);
    std::size_t p = k;
    while (p > 0 && cur[p - 1] == n - k + p) --p;
    if (p == 0) break;
    ++cur[p - 1];
    for (std::size_t q = p; q < k; ++q) cur[q] = cur[q - 1] + 1;
  }
  return out;
}

/// Checks a 1-based permutation of [n].
inline void require_permutation(const std::vector<std::size_t>& perm, std::size_t n) {
  if (perm.size() != n) throw ArgumentError("permutation has wrong length");
  std::vector<bool> seen(n + 1, false);
  for (auto v : perm) {
    if (v < 1 || v > n || seen[v]) throw ArgumentError("not a permutation of [n]");
    seen[v] = true;
  }
}

}  // namespace pstab
