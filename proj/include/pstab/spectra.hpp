#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pstab/errors.hpp"
#include "pstab/matrix.hpp"
#include "pstab/rational.hpp"

namespace pstab {

inline constexpr std::size_t kMaxSpectrumDim = 64;

/// The one place where exact values become doubles.
inline double to_double(const Rational& q) { return q.convert_to<double>(); }

struct Spectrum {
  std::vector<std::complex<double>> eigenvalues;
  std::string method;
  /// Relative tolerance used for the trace/determinant consistency checks.
  double tol_backward = 0;
};

struct SpectralTolerances {
  double tol_imag = 1e-8;
  double tol_pos = 1e-9;
  double tol_sep = 1e-9;
};

/// Eigenvalues of the double image of M (real Schur form via Francis QR).
/// Throws NumericError if the iteration fails or if the eigenvalue sum or
/// product drifts from the exact trace or determinant by more than
/// n * 1e-8 * (1 + |exact|).
inline Spectrum eigenvalues(const ExactMatrix& m) {
  const std::size_t n = m.size();
  if (n > kMaxSpectrumDim) throw ArgumentError("eigenvalues limited to n <= 64");
  Eigen::MatrixXd a(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) a(r, c) = to_double(m(r, c));
  Eigen::EigenSolver<Eigen::MatrixXd> solver(a, false);
  if (solver.info() != Eigen::Success)
    throw NumericError("eigenvalue iteration did not converge (n = " + std::to_string(n) + ")");

  Spectrum s;
  s.method = "eigen-francis-qr";
  s.tol_backward = static_cast<double>(n) * 1e-8;
  std::complex<double> sum = 0, prod = 1;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    s.eigenvalues.push_back(solver.eigenvalues()[i]);
    sum += s.eigenvalues.back();
    prod *= s.eigenvalues.back();
  }
  const double tr = to_double(trace(m));
  const double dt = to_double(det(m));
  if (std::abs(sum - tr) > s.tol_backward * (1 + std::abs(tr)))
    throw NumericError("eigenvalue sum " + std::to_string(sum.real()) + " disagrees with trace " +
                       std::to_string(tr));
  if (std::abs(prod - dt) > s.tol_backward * (1 + std::abs(dt)))
    throw NumericError("eigenvalue product " + std::to_string(prod.real()) +
                       " disagrees with determinant " + std::to_string(dt));
  return s;
}

inline double min_real_part(const Spectrum& s) {
  double lo = std::numeric_limits<double>::infinity();
  for (const auto& z : s.eigenvalues) lo = std::min(lo, z.real());
  return lo;
}

inline bool is_positively_stable(const Spectrum& s, double margin = 0) {
  return !s.eigenvalues.empty() && min_real_part(s) > margin;
}

enum class WedgeKind { kellogg, sharpened };

struct WedgeResult {
  bool holds = false;
  /// min over eigenvalues of bound - |arg lambda|.
  double margin = 0;
  double bound = 0;
};

inline double wedge_bound(std::size_t n, WedgeKind kind) {
  const double pi = std::numbers::pi;
  const double nn = static_cast<double>(n);
  return kind == WedgeKind::kellogg ? pi - pi / nn : pi / 2 - pi / (2 * nn);
}

/// |arg lambda| < bound for every eigenvalue; `tol` widens the bound. For n = 1
/// both bounds are 0 (real) and a positive eigenvalue passes with zero margin
/// only when tol > 0.
inline WedgeResult wedge_check(const Spectrum& s, std::size_t n, WedgeKind kind, double tol = 0) {
  WedgeResult r;
  r.bound = wedge_bound(n, kind);
  r.margin = std::numeric_limits<double>::infinity();
  for (const auto& z : s.eigenvalues) r.margin = std::min(r.margin, r.bound - std::abs(std::arg(z)));
  r.holds = s.eigenvalues.size() == n && r.margin + tol > 0;
  return r;
}

/// Numeric surrogate for "positive and simple": every eigenvalue near-real,
/// real part at least tol_pos, and all pairwise distances at least tol_sep.
inline bool positive_simple(const Spectrum& s, const SpectralTolerances& tols = {}) {
  for (const auto& z : s.eigenvalues) {
    if (std::abs(z.imag()) > tols.tol_imag * std::max(1.0, std::abs(z))) return false;
    if (z.real() < tols.tol_pos) return false;
  }
  for (std::size_t i = 0; i < s.eigenvalues.size(); ++i)
    for (std::size_t k = i + 1; k < s.eigenvalues.size(); ++k)
      if (std::abs(s.eigenvalues[i] - s.eigenvalues[k]) < tols.tol_sep) return false;
  return true;
}

namespace detail {

/// Minimum-cost perfect assignment (Hungarian method, O(n^3)).
/// Returns match[i] = column assigned to row i.
inline std::vector<std::size_t> hungarian(const std::vector<std::vector<double>>& cost) {
  const std::size_t n = cost.size();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0), v(n + 1, 0), minv(n + 1);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  std::vector<bool> used(n + 1);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), false);
    do {
      used[j0] = true;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> match(n);
  for (std::size_t j = 1; j <= n; ++j) match[p[j] - 1] = j - 1;
  return match;
}

}  // namespace detail

struct SpectrumMatch {
  bool holds = false;
  /// Largest |a_i - b_match(i)| under the optimal assignment.
  double max_deviation = 0;
  std::vector<std::size_t> assignment;
};

/// Multiset comparison: pairs are matched by optimal assignment on |a - b|,
/// then each pair must satisfy |a - b| <= abs_tol + rel_tol * max(|a|, |b|).
inline SpectrumMatch spectra_match(const std::vector<std::complex<double>>& a,
                                   const std::vector<std::complex<double>>& b, double abs_tol,
                                   double rel_tol = 0) {
  SpectrumMatch r;
  if (a.size() != b.size()) return r;
  std::vector<std::vector<double>> cost(a.size(), std::vector<double>(b.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < b.size(); ++k) cost[i][k] = std::abs(a[i] - b[k]);
  r.assignment = detail::hungarian(cost);
  r.holds = true;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto& x = a[i];
    const auto& y = b[r.assignment[i]];
    const double d = std::abs(x - y);
    r.max_deviation = std::max(r.max_deviation, d);
    if (d > abs_tol + rel_tol * std::max(std::abs(x), std::abs(y))) r.holds = false;
  }
  return r;
}

}  // namespace pstab
