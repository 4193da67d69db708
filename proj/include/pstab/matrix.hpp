#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pstab/errors.hpp"
#include "pstab/index_set.hpp"
#include "pstab/rational.hpp"

namespace pstab {

/// Dense square matrix of exact rationals, row-major, n >= 1.
///
/// Element access through operator() is 0-based; everything that selects rows
/// or columns by index set uses the 1-based IndexSet.
class ExactMatrix {
 public:
  explicit ExactMatrix(std::size_t n) : n_(n), a_(n * n) {
    if (n == 0) throw ArgumentError("matrix dimension must be at least 1");
  }

  ExactMatrix(std::initializer_list<std::initializer_list<Rational>> rows)
      : ExactMatrix(rows.size()) {
    std::size_t r = 0;
    for (const auto& row : rows) {
      if (row.size() != n_) throw ArgumentError("matrix must be square");
      std::size_t c = 0;
      for (const auto& v : row) (*this)(r, c++) = v;
      ++r;
    }
  }

  static ExactMatrix from_rows(const std::vector<std::vector<Rational>>& rows) {
    ExactMatrix m(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].size() != rows.size()) throw ArgumentError("matrix must be square");
      for (std::size_t c = 0; c < rows.size(); ++c) m(r, c) = rows[r][c];
    }
    return m;
  }

  static ExactMatrix identity(std::size_t n) {
    ExactMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  static ExactMatrix diagonal(std::span<const Rational> d) {
    ExactMatrix m(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  std::size_t size() const { return n_; }

  Rational& operator()(std::size_t r, std::size_t c) { return a_[r * n_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const { return a_[r * n_ + c]; }

  ExactMatrix transpose() const {
    ExactMatrix t(n_);
    for (std::size_t r = 0; r < n_; ++r)
      for (std::size_t c = 0; c < n_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  friend ExactMatrix operator*(const ExactMatrix& x, const ExactMatrix& y) {
    require_same_size(x, y);
    const std::size_t n = x.n_;
    ExactMatrix p(n);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t k = 0; k < n; ++k) {
        const Rational& xrk = x(r, k);
        if (xrk == 0) continue;
        for (std::size_t c = 0; c < n; ++c) p(r, c) += xrk * y(k, c);
      }
    return p;
  }

  friend ExactMatrix operator+(ExactMatrix x, const ExactMatrix& y) {
    require_same_size(x, y);
    for (std::size_t i = 0; i < x.a_.size(); ++i) x.a_[i] += y.a_[i];
    return x;
  }

  friend ExactMatrix operator-(ExactMatrix x, const ExactMatrix& y) {
    require_same_size(x, y);
    for (std::size_t i = 0; i < x.a_.size(); ++i) x.a_[i] -= y.a_[i];
    return x;
  }

  friend ExactMatrix operator*(const Rational& s, ExactMatrix x) {
    for (auto& v : x.a_) v *= s;
    return x;
  }

  friend bool operator==(const ExactMatrix& x, const ExactMatrix& y) {
    return x.n_ == y.n_ && x.a_ == y.a_;
  }

 private:
  static void require_same_size(const ExactMatrix& x, const ExactMatrix& y) {
    if (x.n_ != y.n_)
      throw ArgumentError("dimension mismatch: " + std::to_string(x.n_) + " vs " +
                          std::to_string(y.n_));
  }

  std::size_t n_;
  std::vector<Rational> a_;
};

namespace detail {

/// Fraction-free (Bareiss) determinant of an m x m integer matrix, row-major.
/// Every division is exact, so intermediate entries stay minors of the input.
inline Integer bareiss_det(std::vector<Integer> a, std::size_t m) {
  if (m == 0) return Integer(1);
  Integer prev = 1;
  bool negate = false;
  for (std::size_t k = 0; k + 1 < m; ++k) {
    if (a[k * m + k] == 0) {
      std::size_t r = k + 1;
      while (r < m && a[r * m + k] == 0) ++r;
      if (r == m) return Integer(0);
      for (std::size_t c = k; c < m; ++c) std::swap(a[k * m + c], a[r * m + c]);
      negate = !negate;
    }
    const Integer& pivot = a[k * m + k];
    for (std::size_t i = k + 1; i < m; ++i) {
      const Integer& lead = a[i * m + k];
      for (std::size_t j = k + 1; j < m; ++j) {
        Integer v = a[i * m + j] * pivot - lead * a[k * m + j];
        a[i * m + j] = v / prev;
      }
    }
    prev = pivot;
  }
  Integer d = a[m * m - 1];
  return negate ? Integer(-d) : d;
}

/// Integer image of a rational matrix: row r is multiplied by the lcm of its
/// denominators. A minor of the original is the integer minor divided by the
/// product of the selected row scales.
class IntegerImage {
 public:
  explicit IntegerImage(const ExactMatrix& m) : n_(m.size()), a_(n_ * n_), scale_(n_) {
    for (std::size_t r = 0; r < n_; ++r) {
      Integer l = 1;
      for (std::size_t c = 0; c < n_; ++c) l = boost::multiprecision::lcm(l, denominator_of(m(r, c)));
      scale_[r] = l;
      for (std::size_t c = 0; c < n_; ++c)
        a_[r * n_ + c] = numerator_of(m(r, c)) * (l / denominator_of(m(r, c)));
    }
  }

  /// Minor on 0-based row/column positions, both of equal length.
  Rational minor(std::span<const std::size_t> rows, std::span<const std::size_t> cols) const {
    const std::size_t k = rows.size();
    std::vector<Integer> sub(k * k);
    Integer denom = 1;
    for (std::size_t i = 0; i < k; ++i) {
      denom *= scale_[rows[i]];
      for (std::size_t j = 0; j < k; ++j) sub[i * k + j] = a_[rows[i] * n_ + cols[j]];
    }
    return Rational(bareiss_det(std::move(sub), k), denom);
  }

  Rational minor(const IndexSet& rows, const IndexSet& cols) const {
    return minor(zero_based(rows), zero_based(cols));
  }

  static std::vector<std::size_t> zero_based(const IndexSet& s) {
    std::vector<std::size_t> v;
    v.reserve(s.size());
    for (auto i : s) v.push_back(i - 1);
    return v;
  }

 private:
  std::size_t n_;
  std::vector<Integer> a_;
  std::vector<Integer> scale_;
};

inline void require_within(const IndexSet& s, std::size_t n, const char* what) {
  for (auto i : s)
    if (i > n) throw ArgumentError(std::string(what) + " index exceeds dimension");
}

}  // namespace detail

inline Rational det(const ExactMatrix& m) {
  std::vector<std::size_t> all(m.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return detail::IntegerImage(m).minor(all, all);
}

/// Determinant of the submatrix on the given rows and columns.
inline Rational minor(const ExactMatrix& m, const IndexSet& rows, const IndexSet& cols) {
  if (rows.size() != cols.size())
    throw ArgumentError("minor needs equally many rows and columns");
  detail::require_within(rows, m.size(), "row");
  detail::require_within(cols, m.size(), "column");
  if (rows.empty()) return Rational(1);
  ExactMatrix sub(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) sub(i, j) = m(rows[i] - 1, cols[j] - 1);
  return det(sub);
}

inline ExactMatrix principal_submatrix(const ExactMatrix& m, const IndexSet& s) {
  if (s.empty()) throw ArgumentError("principal submatrix of an empty index set");
  detail::require_within(s, m.size(), "principal");
  ExactMatrix sub(s.size());
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = 0; j < s.size(); ++j) sub(i, j) = m(s[i] - 1, s[j] - 1);
  return sub;
}

/// Exact inverse by Gauss-Jordan elimination.
inline ExactMatrix inverse(const ExactMatrix& m) {
  const std::size_t n = m.size();
  ExactMatrix a = m;
  ExactMatrix inv = ExactMatrix::identity(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && a(p, k) == 0) ++p;
    if (p == n) throw SingularMatrixError("matrix is singular");
    if (p != k)
      for (std::size_t c = 0; c < n; ++c) {
        std::swap(a(k, c), a(p, c));
        std::swap(inv(k, c), inv(p, c));
      }
    const Rational pivot_inv = 1 / a(k, k);
    for (std::size_t c = 0; c < n; ++c) {
      a(k, c) *= pivot_inv;
      inv(k, c) *= pivot_inv;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == k || a(r, k) == 0) continue;
      const Rational f = a(r, k);
      for (std::size_t c = 0; c < n; ++c) {
        a(r, c) -= f * a(k, c);
        inv(r, c) -= f * inv(k, c);
      }
    }
  }
  return inv;
}

inline ExactMatrix abs_matrix(const ExactMatrix& m) {
  ExactMatrix r(m.size());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j) r(i, j) = abs(m(i, j));
  return r;
}

inline Rational trace(const ExactMatrix& m) {
  Rational t = 0;
  for (std::size_t i = 0; i < m.size(); ++i) t += m(i, i);
  return t;
}

/// Symmetric permutation: result(theta(p), theta(q)) = m(p, q), theta 1-based.
/// With (P)_{p,theta(p)} = 1 this is P^{-1} m P.
inline ExactMatrix permutation_similarity(const ExactMatrix& m, const std::vector<std::size_t>& theta) {
  require_permutation(theta, m.size());
  ExactMatrix r(m.size());
  for (std::size_t p = 0; p < m.size(); ++p)
    for (std::size_t q = 0; q < m.size(); ++q) r(theta[p] - 1, theta[q] - 1) = m(p, q);
  return r;
}

}  // namespace pstab
