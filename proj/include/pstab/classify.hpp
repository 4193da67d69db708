#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "pstab/compound.hpp"
#include "pstab/errors.hpp"
#include "pstab/index_set.hpp"
#include "pstab/matrix.hpp"
#include "pstab/rational.hpp"

namespace pstab {

// Exhaustive minor enumeration: 2^n - 1 principal minors for P, sum over j of
// C(n,j)^2 minors for the compound-based tests, and C(n,j)^2 ordered pairs per
// order for sign symmetry (hence its tighter cap).
inline constexpr std::size_t kMaxClassifyDim = 10;
inline constexpr std::size_t kMaxSignSymmetryDim = 7;

/// Evidence that a class condition fails. For minor-type checks `rows`/`cols`
/// name the offending minor; for sum-type checks (Q) they are empty and
/// `order` names the failing order. `on_square` marks a failure in M^2.
struct Witness {
  std::size_t order = 0;
  std::optional<IndexSet> rows;
  std::optional<IndexSet> cols;
  Rational value;
  bool on_square = false;

  std::string describe() const {
    std::string s = (on_square ? "square: " : "") + std::string("order ") + std::to_string(order);
    if (rows) s += " rows " + rows->str();
    if (cols) s += " cols " + cols->str();
    return s + " value " + to_canonical_string(value);
  }
};

struct Verdict {
  bool holds = true;
  std::optional<Witness> witness;
  explicit operator bool() const { return holds; }
};

struct QVerdict {
  bool holds = true;
  std::optional<Witness> witness;
  /// Element k-1 is the sum of the principal minors of order k.
  std::vector<Rational> order_sums;
  explicit operator bool() const { return holds; }
};

enum class Side { row, col };

namespace detail {

inline void require_classify_dim(std::size_t n) {
  if (n > kMaxClassifyDim)
    throw ArgumentError("classification limited to n <= " + std::to_string(kMaxClassifyDim));
}

inline QVerdict q_from_sums(std::vector<Rational> sums, bool on_square) {
  QVerdict v;
  v.order_sums = std::move(sums);
  for (std::size_t k = 0; k < v.order_sums.size(); ++k)
    if (v.order_sums[k].sign() <= 0) {
      v.holds = false;
      v.witness = Witness{k + 1, std::nullopt, std::nullopt, v.order_sums[k], on_square};
      break;
    }
  return v;
}

/// Principal minors of M^2 read off the compounds of M via Cauchy-Binet:
/// (M^2)^(j) = (M^(j))^2, so the diagonal entry alpha is the row-column product.
inline Rational square_principal_minor(const ExactMatrix& c, std::size_t a) {
  Rational s = 0;
  for (std::size_t b = 0; b < c.size(); ++b) s += c(a, b) * c(b, a);
  return s;
}

inline Verdict p_from_compounds(const std::vector<CompoundMatrix>& cs, bool on_square) {
  for (const auto& c : cs) {
    for (std::size_t a = 0; a < c.data.size(); ++a) {
      Rational v = on_square ? square_principal_minor(c.data, a) : c.data(a, a);
      if (v.sign() <= 0) {
        auto s = lex_unrank(c.base_n, c.order_j, a + 1);
        return {false, Witness{c.order_j, s, s, v, on_square}};
      }
    }
  }
  return {};
}

inline std::vector<Rational> traces(const std::vector<CompoundMatrix>& cs) {
  std::vector<Rational> t;
  for (const auto& c : cs) t.push_back(trace(c.data));
  return t;
}

inline std::vector<Rational> square_traces(const std::vector<CompoundMatrix>& cs) {
  std::vector<Rational> t;
  for (const auto& c : cs) t.push_back(trace_of_square(c.data));
  return t;
}

inline Verdict sign_symmetric_from(const std::vector<CompoundMatrix>& cs) {
  for (const auto& c : cs)
    for (std::size_t a = 0; a < c.data.size(); ++a)
      for (std::size_t b = a + 1; b < c.data.size(); ++b) {
        Rational prod = c.data(a, b) * c.data(b, a);
        if (prod.sign() < 0)
          return {false, Witness{c.order_j, lex_unrank(c.base_n, c.order_j, a + 1),
                                 lex_unrank(c.base_n, c.order_j, b + 1), prod, false}};
      }
  return {};
}

inline Verdict sqdd_from(const std::vector<CompoundMatrix>& cs, Side side) {
  for (const auto& c : cs)
    for (std::size_t a = 0; a < c.data.size(); ++a) {
      Rational off = 0;
      for (std::size_t b = 0; b < c.data.size(); ++b) {
        if (b == a) continue;
        const Rational& x = side == Side::row ? c.data(a, b) : c.data(b, a);
        off += x * x;
      }
      Rational slack = c.data(a, a) * c.data(a, a) - off;
      if (slack.sign() <= 0) {
        auto s = lex_unrank(c.base_n, c.order_j, a + 1);
        return {false, Witness{c.order_j, s, s, slack, false}};
      }
    }
  return {};
}

}  // namespace detail

/// True iff every principal minor is positive. The witness is the first
/// nonpositive principal minor by (size, lexicographic rank).
inline Verdict is_P(const ExactMatrix& m) {
  detail::require_classify_dim(m.size());
  const detail::IntegerImage image(m);
  for (std::size_t k = 1; k <= m.size(); ++k)
    for (const auto& s : k_subsets(m.size(), k)) {
      Rational v = image.minor(s, s);
      if (v.sign() <= 0) return {false, Witness{k, s, s, v, false}};
    }
  return {};
}

/// True iff Tr(M^(k)) > 0 for k = 1..n. Order sums are returned either way.
inline QVerdict is_Q(const ExactMatrix& m) {
  detail::require_classify_dim(m.size());
  return detail::q_from_sums(detail::traces(all_compounds(m)), false);
}

/// P and P of M^2; the square's principal minors come from M's compounds.
inline Verdict is_P2(const ExactMatrix& m) {
  detail::require_classify_dim(m.size());
  const auto cs = all_compounds(m);
  if (auto v = detail::p_from_compounds(cs, false); !v) return v;
  return detail::p_from_compounds(cs, true);
}

/// Q and Q of M^2, with Tr((M^2)^(j)) = Tr((M^(j))^2).
inline Verdict is_Q2(const ExactMatrix& m) {
  detail::require_classify_dim(m.size());
  const auto cs = all_compounds(m);
  if (auto q = detail::q_from_sums(detail::traces(cs), false); !q) return {false, q.witness};
  auto q2 = detail::q_from_sums(detail::square_traces(cs), true);
  return {q2.holds, q2.witness};
}

/// A(alpha; beta) * A(beta; alpha) >= 0 for every pair of same-size index sets.
inline Verdict is_sign_symmetric(const ExactMatrix& m) {
  if (m.size() > kMaxSignSymmetryDim)
    throw ArgumentError("sign-symmetry check limited to n <= " + std::to_string(kMaxSignSymmetryDim));
  return detail::sign_symmetric_from(all_compounds(m));
}

/// Strict square diagonal dominance for every order of minors:
/// A(alpha;alpha)^2 > sum over beta != alpha of A(alpha;beta)^2 (row side;
/// the column side uses A(beta;alpha)). The witness value is the slack.
inline Verdict is_square_diag_dominant(const ExactMatrix& m, Side side) {
  detail::require_classify_dim(m.size());
  return detail::sqdd_from(all_compounds(m), side);
}

struct ClassReport {
  std::size_t n = 0;
  Verdict p, q, p2, q2;
  /// Empty when n exceeds kMaxSignSymmetryDim.
  std::optional<Verdict> sign_symmetric;
  Verdict row_sqdd, col_sqdd;
  std::vector<Rational> order_sums;
  std::vector<Rational> square_order_sums;

  /// The implications every report must satisfy.
  bool consistent() const {
    if (p2.holds && !p.holds) return false;
    if (q2.holds && !q.holds) return false;
    if (p.holds && !q.holds) return false;
    for (const Verdict* v : {&p, &q, &p2, &q2, &row_sqdd, &col_sqdd})
      if (!v->holds && !v->witness) return false;
    if (sign_symmetric && !sign_symmetric->holds && !sign_symmetric->witness) return false;
    return true;
  }
};

/// One compound pass over M serves every class test.
inline ClassReport classify_full(const ExactMatrix& m) {
  detail::require_classify_dim(m.size());
  const auto cs = all_compounds(m);
  ClassReport r;
  r.n = m.size();
  r.p = detail::p_from_compounds(cs, false);
  r.order_sums = detail::traces(cs);
  r.square_order_sums = detail::square_traces(cs);
  auto q = detail::q_from_sums(r.order_sums, false);
  r.q = {q.holds, q.witness};
  if (r.p.holds) {
    r.p2 = detail::p_from_compounds(cs, true);
  } else {
    r.p2 = r.p;
  }
  if (!r.q.holds) {
    r.q2 = r.q;
  } else {
    auto q2 = detail::q_from_sums(r.square_order_sums, true);
    r.q2 = {q2.holds, q2.witness};
  }
  if (m.size() <= kMaxSignSymmetryDim) r.sign_symmetric = detail::sign_symmetric_from(cs);
  r.row_sqdd = detail::sqdd_from(cs, Side::row);
  r.col_sqdd = detail::sqdd_from(cs, Side::col);
  return r;
}

}  // namespace pstab
