#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "pstab/errors.hpp"
#include "pstab/index_set.hpp"
#include "pstab/matrix.hpp"
#include "pstab/rational.hpp"

namespace pstab {

/// Caps for the literal permutation-sum exterior product (j! * C(n,j)^2 minors).
inline constexpr std::size_t kMaxExteriorDim = 6;
inline constexpr std::size_t kMaxExteriorOrder = 4;

/// j-th compound A^(j): entry (alpha, beta) is the minor on rows
/// lex_unrank(n, j, alpha) and columns lex_unrank(n, j, beta).
struct CompoundMatrix {
  std::size_t base_n;
  std::size_t order_j;
  ExactMatrix data;
};

/// A_m^(j), the exterior product of m copies of A with j - m identities,
/// scaled so that the diagonal case is the elementary symmetric polynomial
/// (see generalized_compound).
struct GeneralizedCompound {
  std::size_t base_n;
  std::size_t order_j;
  std::size_t wedge_m;
  ExactMatrix data;
};

namespace detail {

inline void require_order(std::size_t n, std::size_t j) {
  if (j < 1 || j > n)
    throw ArgumentError("compound order " + std::to_string(j) + " outside [1, " +
                        std::to_string(n) + "]");
}

inline void require_wedge(std::size_t n, std::size_t j, std::size_t m) {
  require_order(n, j);
  if (m < 1 || m > j)
    throw ArgumentError("wedge count " + std::to_string(m) + " outside [1, " +
                        std::to_string(j) + "]");
}

/// Determinant of the j x j matrix whose column p is column cols[p] of
/// factors[p], restricted to `rows` (all 0-based).
inline Rational mixed_minor(std::span<const ExactMatrix* const> factors,
                            std::span<const std::size_t> rows, std::span<const std::size_t> cols) {
  const std::size_t j = rows.size();
  ExactMatrix sub(j);
  for (std::size_t r = 0; r < j; ++r)
    for (std::size_t p = 0; p < j; ++p) sub(r, p) = (*factors[p])(rows[r], cols[p]);
  return det(sub);
}

}  // namespace detail

/// x_1 ^ ... ^ x_j: coordinate alpha is the j x j determinant of the vector
/// components on rows lex_unrank(n, j, alpha), one column per vector.
inline std::vector<Rational> wedge_vectors(std::span<const std::vector<Rational>> xs) {
  const std::size_t j = xs.size();
  if (j == 0) throw ArgumentError("wedge of no vectors");
  const std::size_t n = xs[0].size();
  for (const auto& x : xs)
    if (x.size() != n) throw ArgumentError("wedge operands differ in length");
  if (j < 2 || j > n) throw ArgumentError("wedge needs 2 <= j <= n vectors");
  std::vector<Rational> out;
  out.reserve(binomial(n, j));
  for (const auto& rows : k_subsets(n, j)) {
    ExactMatrix sub(j);
    for (std::size_t r = 0; r < j; ++r)
      for (std::size_t p = 0; p < j; ++p) sub(r, p) = xs[p][rows[r] - 1];
    out.push_back(det(sub));
  }
  return out;
}

inline CompoundMatrix compound(const ExactMatrix& m, std::size_t j) {
  const std::size_t n = m.size();
  detail::require_order(n, j);
  const auto sets = k_subsets(n, j);
  std::vector<std::vector<std::size_t>> pos;
  pos.reserve(sets.size());
  for (const auto& s : sets) pos.push_back(detail::IntegerImage::zero_based(s));
  const detail::IntegerImage image(m);
  ExactMatrix data(sets.size());
  for (std::size_t a = 0; a < sets.size(); ++a)
    for (std::size_t b = 0; b < sets.size(); ++b) data(a, b) = image.minor(pos[a], pos[b]);
  return {n, j, std::move(data)};
}

/// All compounds A^(1), ..., A^(n); element j-1 holds order j.
inline std::vector<CompoundMatrix> all_compounds(const ExactMatrix& m) {
  std::vector<CompoundMatrix> out;
  out.reserve(m.size());
  for (std::size_t j = 1; j <= m.size(); ++j) out.push_back(compound(m, j));
  return out;
}

/// A_1 ^ ... ^ A_j with entries
///   zeta(alpha, beta) = (1/j!) * sum over permutations theta of the mixed
///   minor whose p-th column is column k_p of A_theta(p).
/// Limited to n <= 6 and j <= 4.
inline ExactMatrix exterior_product(std::span<const ExactMatrix> ms) {
  const std::size_t j = ms.size();
  if (j == 0) throw ArgumentError("exterior product of no matrices");
  const std::size_t n = ms[0].size();
  for (const auto& m : ms)
    if (m.size() != n) throw ArgumentError("exterior product operands differ in dimension");
  detail::require_order(n, j);
  if (n > kMaxExteriorDim || j > kMaxExteriorOrder)
    throw ArgumentError("exterior_product limited to n <= 6, j <= 4");

  const auto sets = k_subsets(n, j);
  std::vector<std::size_t> theta(j);
  std::iota(theta.begin(), theta.end(), 0);
  std::vector<std::vector<const ExactMatrix*>> assignments;
  do {
    std::vector<const ExactMatrix*> f(j);
    for (std::size_t p = 0; p < j; ++p) f[p] = &ms[theta[p]];
    assignments.push_back(std::move(f));
  } while (std::next_permutation(theta.begin(), theta.end()));
  const Rational scale(1, static_cast<long>(assignments.size()));

  ExactMatrix out(sets.size());
  for (std::size_t a = 0; a < sets.size(); ++a) {
    const auto rows = detail::IntegerImage::zero_based(sets[a]);
    for (std::size_t b = 0; b < sets.size(); ++b) {
      const auto cols = detail::IntegerImage::zero_based(sets[b]);
      Rational s = 0;
      for (const auto& f : assignments) s += detail::mixed_minor(f, rows, cols);
      out(a, b) = s * scale;
    }
  }
  return out;
}

/// Generalized compound A_m^(j).
///
/// Since equal factors commute, the permutation sum collapses to a sum over
/// which m of the j column slots draw from A (the rest from I). The sum is
/// left unnormalised: the result is C(j,m) * exterior_product(A x m, I x (j-m)),
/// which makes diag(d)_m^(j) the elementary symmetric polynomial e_m of d on
/// each index set and A_j^(j) = A^(j).
inline GeneralizedCompound generalized_compound(const ExactMatrix& m, std::size_t j, std::size_t wedge) {
  const std::size_t n = m.size();
  detail::require_wedge(n, j, wedge);
  if (wedge == j) return {n, j, wedge, compound(m, j).data};

  const ExactMatrix id = ExactMatrix::identity(n);
  std::vector<std::vector<const ExactMatrix*>> slot_choices;
  for (const auto& slots : k_subsets(j, wedge)) {
    std::vector<const ExactMatrix*> f(j, &id);
    for (auto s : slots) f[s - 1] = &m;
    slot_choices.push_back(std::move(f));
  }
  const auto sets = k_subsets(n, j);
  ExactMatrix out(sets.size());
  for (std::size_t a = 0; a < sets.size(); ++a) {
    const auto rows = detail::IntegerImage::zero_based(sets[a]);
    for (std::size_t b = 0; b < sets.size(); ++b) {
      const auto cols = detail::IntegerImage::zero_based(sets[b]);
      Rational s = 0;
      for (const auto& f : slot_choices) s += detail::mixed_minor(f, rows, cols);
      out(a, b) = s;
    }
  }
  return {n, j, wedge, std::move(out)};
}

/// e_0..e_m of the given values by the usual product recurrence.
inline std::vector<Rational> elementary_symmetric(std::span<const Rational> values, std::size_t m) {
  std::vector<Rational> e(m + 1, Rational(0));
  e[0] = 1;
  for (const auto& v : values)
    for (std::size_t k = std::min(m, values.size()); k >= 1; --k) e[k] += e[k - 1] * v;
  return e;
}

/// Fast path for a diagonal D = diag(d): D_m^(j) is diagonal with entry
/// e_m(d_{i_1}, ..., d_{i_j}) for the index set (i_1 < ... < i_j) of rank alpha.
inline GeneralizedCompound diag_generalized_compound(std::span<const Rational> d, std::size_t j,
                                                     std::size_t wedge) {
  const std::size_t n = d.size();
  detail::require_wedge(n, j, wedge);
  const auto sets = k_subsets(n, j);
  ExactMatrix out(sets.size());
  std::vector<Rational> vals(j);
  for (std::size_t a = 0; a < sets.size(); ++a) {
    for (std::size_t p = 0; p < j; ++p) vals[p] = d[sets[a][p] - 1];
    out(a, a) = elementary_symmetric(vals, wedge)[wedge];
  }
  return {n, j, wedge, std::move(out)};
}

/// A^(j)[1..m]: the principal submatrix of A^(j) on the index sets that
/// contain {1, ..., m}. Those are exactly the first C(n-m, j-m) sets in
/// lexicographic order; the selection is done by filtering and the prefix
/// property is checked.
inline ExactMatrix compound_block(const CompoundMatrix& c, std::size_t m) {
  const std::size_t n = c.base_n;
  const std::size_t j = c.order_j;
  detail::require_wedge(n, j, m);
  const IndexSet head = IndexSet::range(n, 1, m);
  std::vector<std::size_t> keep;
  std::size_t a = 0;
  for (const auto& s : k_subsets(n, j)) {
    if (std::all_of(head.begin(), head.end(), [&](std::size_t i) { return s.contains(i); }))
      keep.push_back(a);
    ++a;
  }
  if (keep.size() != binomial(n - m, j - m) || (!keep.empty() && keep.back() + 1 != keep.size()))
    throw std::logic_error("index sets containing {1..m} are not a lexicographic prefix");
  ExactMatrix out(keep.size());
  for (std::size_t r = 0; r < keep.size(); ++r)
    for (std::size_t s = 0; s < keep.size(); ++s) out(r, s) = c.data(keep[r], keep[s]);
  return out;
}

inline ExactMatrix compound_block(const ExactMatrix& m, std::size_t j, std::size_t wedge) {
  detail::require_wedge(m.size(), j, wedge);
  return compound_block(compound(m, j), wedge);
}

/// Tr(C^2) = sum over alpha, beta of C(alpha,beta) * C(beta,alpha), without forming C^2.
inline Rational trace_of_square(const ExactMatrix& c) {
  Rational t = 0;
  for (std::size_t a = 0; a < c.size(); ++a) {
    t += c(a, a) * c(a, a);
    for (std::size_t b = a + 1; b < c.size(); ++b) t += 2 * (c(a, b) * c(b, a));
  }
  return t;
}

}  // namespace pstab
