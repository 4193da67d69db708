#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pstab/classify.hpp"
#include "pstab/compound.hpp"
#include "pstab/errors.hpp"
#include "pstab/index_set.hpp"
#include "pstab/matrix.hpp"
#include "pstab/nest.hpp"
#include "pstab/rational.hpp"
#include "pstab/spectra.hpp"

namespace pstab {

// ---------------------------------------------------------------------------
// Schur complements and Sylvester's identity

/// M|M_kk = M22 - M21 * M11^{-1} * M12 for the leading k x k block, 1 <= k < n.
inline ExactMatrix schur_complement(const ExactMatrix& m, std::size_t k) {
  const std::size_t n = m.size();
  if (k < 1 || k >= n) throw ArgumentError("Schur complement needs 1 <= k < n");
  ExactMatrix inv11(k);
  try {
    inv11 = inverse(principal_submatrix(m, IndexSet::range(n, 1, k)));
  } catch (const SingularMatrixError&) {
    throw SingularMatrixError("leading " + std::to_string(k) + "x" + std::to_string(k) +
                              " block is singular");
  }
  const std::size_t r = n - k;
  // t = M11^{-1} * M12, k x r
  std::vector<Rational> t(k * r);
  for (std::size_t p = 0; p < k; ++p)
    for (std::size_t c = 0; c < r; ++c) {
      Rational s = 0;
      for (std::size_t q = 0; q < k; ++q) s += inv11(p, q) * m(q, k + c);
      t[p * r + c] = s;
    }
  ExactMatrix out(r);
  for (std::size_t l = 0; l < r; ++l)
    for (std::size_t c = 0; c < r; ++c) {
      Rational s = m(k + l, k + c);
      for (std::size_t p = 0; p < k; ++p) s -= m(k + l, p) * t[p * r + c];
      out(l, c) = s;
    }
  return out;
}

/// The same complement from the entry formula
/// c_lr = M(1..k, k+l; 1..k, k+r) / M(1..k; 1..k).
inline ExactMatrix schur_complement_by_minors(const ExactMatrix& m, std::size_t k) {
  const std::size_t n = m.size();
  if (k < 1 || k >= n) throw ArgumentError("Schur complement needs 1 <= k < n");
  const IndexSet head = IndexSet::range(n, 1, k);
  const detail::IntegerImage image(m);
  const Rational pivot = image.minor(head, head);
  if (pivot == 0) throw SingularMatrixError("leading block is singular");
  ExactMatrix out(n - k);
  for (std::size_t l = 1; l <= n - k; ++l)
    for (std::size_t r = 1; r <= n - k; ++r)
      out(l - 1, r - 1) = image.minor(head.with(k + l), head.with(k + r)) / pivot;
  return out;
}

namespace detail {

inline std::vector<std::size_t> complement_of(const IndexSet& s) {
  std::vector<std::size_t> v;
  for (std::size_t i = 1; i <= s.ambient(); ++i)
    if (!s.contains(i)) v.push_back(i);
  return v;
}

}  // namespace detail

/// b_lr = M(I, l; J, r) over l not in I and r not in J, both in increasing
/// order. Bordering indices are inserted in sorted position, which keeps the
/// identity sign-free on both sides.
inline ExactMatrix bordered_minor_matrix(const ExactMatrix& m, const IndexSet& pivot_rows,
                                         const IndexSet& pivot_cols) {
  const std::size_t n = m.size();
  if (pivot_rows.size() != pivot_cols.size())
    throw ArgumentError("pivot row and column sets differ in size");
  if (pivot_rows.size() >= n) throw ArgumentError("pivot set leaves nothing to border");
  detail::require_within(pivot_rows, n, "pivot row");
  detail::require_within(pivot_cols, n, "pivot column");
  const auto ls = detail::complement_of(IndexSet(n, pivot_rows.indices()));
  const auto rs = detail::complement_of(IndexSet(n, pivot_cols.indices()));
  const detail::IntegerImage image(m);
  ExactMatrix b(ls.size());
  for (std::size_t x = 0; x < ls.size(); ++x)
    for (std::size_t y = 0; y < rs.size(); ++y)
      b(x, y) = image.minor(IndexSet(n, pivot_rows.indices()).with(ls[x]),
                            IndexSet(n, pivot_cols.indices()).with(rs[y]));
  return b;
}

struct SylvesterViolation {
  IndexSet rows, cols;  // positions in the bordered matrix
  Rational lhs, rhs;
};

struct SylvesterResult {
  bool holds = true;
  std::size_t checked = 0;
  std::optional<SylvesterViolation> violation;
};

/// Checks B(L; R) = M(I; J)^{p-1} * M(I + L; J + R) for every pair of
/// p-subsets L, R of the bordering positions.
inline SylvesterResult sylvester_check(const ExactMatrix& m, const IndexSet& pivot_rows,
                                       const IndexSet& pivot_cols, std::size_t p) {
  const std::size_t n = m.size();
  const std::size_t k = pivot_rows.size();
  const ExactMatrix b = bordered_minor_matrix(m, pivot_rows, pivot_cols);
  if (p < 1 || p > n - k) throw ArgumentError("Sylvester order p outside [1, n - k]");
  const IndexSet prow(n, pivot_rows.indices());
  const IndexSet pcol(n, pivot_cols.indices());
  const auto ls = detail::complement_of(prow);
  const auto rs = detail::complement_of(pcol);
  const detail::IntegerImage image(m);
  const Rational scale = pow(image.minor(prow, pcol), static_cast<unsigned>(p - 1));

  SylvesterResult out;
  for (const auto& L : k_subsets(n - k, p))
    for (const auto& R : k_subsets(n - k, p)) {
      IndexSet rows = prow, cols = pcol;
      for (auto x : L) rows = rows.with(ls[x - 1]);
      for (auto y : R) cols = cols.with(rs[y - 1]);
      Rational lhs = minor(b, L, R);
      Rational rhs = scale * image.minor(rows, cols);
      ++out.checked;
      if (lhs != rhs) {
        out.holds = false;
        out.violation = SylvesterViolation{L, R, lhs, rhs};
        return out;
      }
    }
  return out;
}

// ---------------------------------------------------------------------------
// Certification errors

enum class FailureKind { not_p, not_q2, no_nest, stabilizer_inconclusive, numeric_breach, internal };

inline const char* failure_name(FailureKind k) {
  switch (k) {
    case FailureKind::not_p: return "not_p";
    case FailureKind::not_q2: return "not_q2";
    case FailureKind::no_nest: return "no_nest";
    case FailureKind::stabilizer_inconclusive: return "stabilizer_inconclusive";
    case FailureKind::numeric_breach: return "numeric_breach";
    case FailureKind::internal: return "internal";
  }
  return "internal";
}

class CertificationError : public std::runtime_error {
 public:
  CertificationError(FailureKind kind, const std::string& what, std::optional<Witness> w = {})
      : std::runtime_error(what), kind_(kind), witness_(std::move(w)) {}
  FailureKind kind() const { return kind_; }
  const std::optional<Witness>& witness() const { return witness_; }
  /// Hypothesis failures, as opposed to an inconclusive run.
  bool refutes() const {
    return kind_ == FailureKind::not_p || kind_ == FailureKind::not_q2 || kind_ == FailureKind::no_nest;
  }

 private:
  FailureKind kind_;
  std::optional<Witness> witness_;
};

// ---------------------------------------------------------------------------
// The transformed matrix B

struct Transform {
  std::vector<std::size_t> theta;  // 1-based, theta[i-1] = theta(i)
  ExactMatrix permuted_A;          // P^{-1} A P
  ExactMatrix B;                   // P^{-1} A^{-1} P
};

/// theta(tau[m-1]) = n - m + 1: the innermost nest element goes last.
inline std::vector<std::size_t> theta_from_tau(const std::vector<std::size_t>& tau) {
  const std::size_t n = tau.size();
  require_permutation(tau, n);
  std::vector<std::size_t> theta(n);
  for (std::size_t m = 1; m <= n; ++m) theta[tau[m - 1] - 1] = n - m + 1;
  return theta;
}

/// Builds B and checks what the construction promises: B is P and Q^2, and for
/// each m the inverse of B|B_mm is the trailing block of the permuted A, which
/// is a reordering of the nest level of size n - m and so itself Q^2.
inline Transform build_B(const ExactMatrix& a, const NestCertificate& nest) {
  const std::size_t n = a.size();
  if (nest.tau.size() != n) throw ArgumentError("nest does not match the matrix dimension");
  Transform t{theta_from_tau(nest.tau), permutation_similarity(a, theta_from_tau(nest.tau)),
              ExactMatrix(n)};
  t.B = permutation_similarity(inverse(a), t.theta);

  auto fail = [](const std::string& what) { throw CertificationError(FailureKind::internal, what); };
  if (!is_P(t.B)) fail("B is not a P-matrix");
  if (!is_Q2(t.B)) fail("B is not a Q^2-matrix");
  for (std::size_t m = 1; m < n; ++m) {
    const ExactMatrix tail = principal_submatrix(t.permuted_A, IndexSet::range(n, m + 1, n));
    if (inverse(schur_complement(t.B, m)) != tail)
      fail("inverse Schur complement of B disagrees with the permuted A at m = " + std::to_string(m));
    if (!is_Q2(tail)) fail("trailing block of the permuted A is not Q^2 at m = " + std::to_string(m));
  }
  return t;
}

using BlockTraces = std::map<std::pair<std::size_t, std::size_t>, Rational>;

/// Tr((B^(j)[1..m])^2) for 1 <= m <= j <= n, keyed (j, m).
inline BlockTraces block_traces(const ExactMatrix& b) {
  BlockTraces out;
  for (const auto& c : all_compounds(b))
    for (std::size_t m = 1; m <= c.order_j; ++m)
      out[{c.order_j, m}] = trace_of_square(compound_block(c, m));
  return out;
}

// ---------------------------------------------------------------------------
// Trace ledger

struct LedgerKey {
  std::size_t j, k, m;
  friend auto operator<=>(const LedgerKey&, const LedgerKey&) = default;
  std::string str() const {
    return "(" + std::to_string(j) + "," + std::to_string(k) + "," + std::to_string(m) + ")";
  }
};

/// T(j,k,m) = Tr(D_k^(j) B^(j) D_m^(j) B^(j)) for 0 <= k,m <= j <= n, with
/// D_0^(j) = I. Expanding (tI + (1-t)D)^(j) = sum_k t^(j-k) (1-t)^k D_k^(j)
/// gives Tr(((D_t B)^(j))^2) = sum_{k,m} t^(2j-k-m) (1-t)^(k+m) T(j,k,m).
struct TraceLedger {
  std::size_t n = 0;
  std::map<LedgerKey, Rational> entries;

  const Rational& at(std::size_t j, std::size_t k, std::size_t m) const { return entries.at({j, k, m}); }

  /// First entry with k, m >= 1 that is not positive.
  std::optional<std::pair<LedgerKey, Rational>> first_nonpositive_hypothesis() const {
    for (const auto& [key, v] : entries)
      if (key.k >= 1 && key.m >= 1 && v.sign() <= 0) return std::pair{key, v};
    return std::nullopt;
  }
  bool hypothesis_positive() const { return !first_nonpositive_hypothesis(); }

  bool all_positive() const {
    return std::all_of(entries.begin(), entries.end(), [](const auto& e) { return e.second.sign() > 0; });
  }
};

/// Precomputes P_j(a, b) = B^(j)(a, b) * B^(j)(b, a), so that
/// T(j,k,m) = w_k^T P_j w_m with w_k(a) = e_k(eps on index set a).
class LedgerEvaluator {
 public:
  explicit LedgerEvaluator(const ExactMatrix& b) : n_(b.size()) {
    for (const auto& c : all_compounds(b)) {
      const std::size_t s = c.data.size();
      ExactMatrix p(s);
      for (std::size_t x = 0; x < s; ++x)
        for (std::size_t y = 0; y < s; ++y) p(x, y) = c.data(x, y) * c.data(y, x);
      products_.push_back(std::move(p));
      sets_.push_back(k_subsets(n_, c.order_j));
    }
  }

  std::size_t size() const { return n_; }

  TraceLedger ledger(std::span<const Rational> eps) const {
    require_eps(eps);
    TraceLedger out;
    out.n = n_;
    for (std::size_t j = 1; j <= n_; ++j) {
      const auto w = weights(eps, j);
      const ExactMatrix& p = products_[j - 1];
      const std::size_t s = p.size();
      for (std::size_t m = 0; m <= j; ++m) {
        std::vector<Rational> pv(s);
        for (std::size_t x = 0; x < s; ++x) {
          Rational acc = 0;
          for (std::size_t y = 0; y < s; ++y) acc += p(x, y) * w[m][y];
          pv[x] = acc;
        }
        for (std::size_t k = 0; k <= j; ++k) {
          Rational acc = 0;
          for (std::size_t x = 0; x < s; ++x) acc += w[k][x] * pv[x];
          out.entries[{j, k, m}] = acc;
        }
      }
    }
    return out;
  }

 private:
  void require_eps(std::span<const Rational> eps) const {
    if (eps.size() != n_) throw ArgumentError("stabilizer length differs from the matrix dimension");
  }

  // w[k][a] = e_k of eps over the a-th j-subset, k = 0..j
  std::vector<std::vector<Rational>> weights(std::span<const Rational> eps, std::size_t j) const {
    const auto& sets = sets_[j - 1];
    std::vector<std::vector<Rational>> w(j + 1, std::vector<Rational>(sets.size()));
    std::vector<Rational> vals(j);
    for (std::size_t a = 0; a < sets.size(); ++a) {
      for (std::size_t p = 0; p < j; ++p) vals[p] = eps[sets[a][p] - 1];
      const auto e = elementary_symmetric(vals, j);
      for (std::size_t k = 0; k <= j; ++k) w[k][a] = e[k];
    }
    return w;
  }

  std::size_t n_;
  std::vector<ExactMatrix> products_;
  std::vector<std::vector<IndexSet>> sets_;
};

// ---------------------------------------------------------------------------
// Exact positivity of the homotopy polynomials

enum class HomotopyStatus { proven, refuted, undecided };

inline const char* homotopy_status_name(HomotopyStatus s) {
  switch (s) {
    case HomotopyStatus::proven: return "proven";
    case HomotopyStatus::refuted: return "refuted";
    case HomotopyStatus::undecided: return "undecided";
  }
  return "undecided";
}

/// p_j(t) = sum_s c_s t^(2j-s) (1-t)^s with c_s = sum_{k+m=s} T(j,k,m).
struct HomotopyOrder {
  std::size_t j = 0;
  std::vector<Rational> coefficients;
  HomotopyStatus status = HomotopyStatus::undecided;
  std::size_t pieces = 0;
  std::size_t max_depth = 0;
  /// For a refutation: a point t in [0,1] with p_j(t) <= 0 and that value.
  std::optional<Rational> witness_t;
  std::optional<Rational> witness_value;
};

struct HomotopyProof {
  std::vector<HomotopyOrder> orders;
  bool proven() const {
    return !orders.empty() && std::all_of(orders.begin(), orders.end(), [](const HomotopyOrder& o) {
             return o.status == HomotopyStatus::proven;
           });
  }
  const HomotopyOrder* first_failure() const {
    for (const auto& o : orders)
      if (o.status != HomotopyStatus::proven) return &o;
    return nullptr;
  }
};

inline constexpr std::size_t kDefaultHomotopyDepth = 48;
inline constexpr std::size_t kMaxHomotopyPieces = std::size_t{1} << 16;

inline std::vector<Rational> homotopy_coefficients(const TraceLedger& ledger, std::size_t j) {
  std::vector<Rational> c(2 * j + 1, Rational(0));
  for (std::size_t k = 0; k <= j; ++k)
    for (std::size_t m = 0; m <= j; ++m) c[k + m] += ledger.at(j, k, m);
  return c;
}

/// Evaluates p_j at t exactly.
inline Rational homotopy_value(const std::vector<Rational>& c, const Rational& t) {
  const std::size_t deg = c.size() - 1;
  const Rational u = 1 - t;
  Rational v = 0;
  for (std::size_t s = 0; s <= deg; ++s)
    v += c[s] * pow(t, static_cast<unsigned>(deg - s)) * pow(u, static_cast<unsigned>(s));
  return v;
}

namespace detail {

struct BernsteinPiece {
  std::vector<Rational> b;
  Rational lo, hi;  // interval in u = 1 - t
  std::size_t depth;
};

inline std::pair<std::vector<Rational>, std::vector<Rational>> de_casteljau_halves(std::vector<Rational> b) {
  const std::size_t deg = b.size() - 1;
  std::vector<Rational> left(deg + 1), right(deg + 1);
  left[0] = b[0];
  right[deg] = b[deg];
  for (std::size_t r = 1; r <= deg; ++r) {
    for (std::size_t i = 0; i + r <= deg; ++i) b[i] = (b[i] + b[i + 1]) / 2;
    left[r] = b[0];
    right[deg - r] = b[deg - r];
  }
  return {std::move(left), std::move(right)};
}

}  // namespace detail

/// Decides p_j > 0 on [0,1] exactly. In u = 1 - t the polynomial is in
/// Bernstein form with coefficients c_s / C(2j, s). A piece is settled when
/// all its coefficients are positive; a nonpositive end coefficient is the
/// polynomial's value at that end and refutes. Otherwise the piece is halved.
inline HomotopyOrder prove_order(std::size_t j, std::vector<Rational> c,
                                 std::size_t depth_cap = kDefaultHomotopyDepth) {
  HomotopyOrder out;
  out.j = j;
  out.coefficients = c;
  const std::size_t deg = c.size() - 1;
  std::vector<Rational> b(deg + 1);
  for (std::size_t s = 0; s <= deg; ++s) b[s] = c[s] / Rational(Integer(binomial(deg, s)));

  std::vector<detail::BernsteinPiece> stack;
  stack.push_back({std::move(b), Rational(0), Rational(1), 0});
  while (!stack.empty()) {
    auto piece = std::move(stack.back());
    stack.pop_back();
    out.max_depth = std::max(out.max_depth, piece.depth);
    auto refute = [&](const Rational& u, const Rational& value) {
      out.status = HomotopyStatus::refuted;
      out.witness_t = 1 - u;
      out.witness_value = value;
    };
    if (piece.b.front().sign() <= 0) {
      refute(piece.lo, piece.b.front());
      return out;
    }
    if (piece.b.back().sign() <= 0) {
      refute(piece.hi, piece.b.back());
      return out;
    }
    if (std::all_of(piece.b.begin(), piece.b.end(), [](const Rational& x) { return x.sign() > 0; })) {
      ++out.pieces;
      continue;
    }
    if (piece.depth >= depth_cap || out.pieces + stack.size() >= kMaxHomotopyPieces) {
      out.status = HomotopyStatus::undecided;
      return out;
    }
    const Rational mid = (piece.lo + piece.hi) / 2;
    auto [left, right] = detail::de_casteljau_halves(std::move(piece.b));
    stack.push_back({std::move(right), mid, piece.hi, piece.depth + 1});
    stack.push_back({std::move(left), piece.lo, mid, piece.depth + 1});
  }
  out.status = HomotopyStatus::proven;
  return out;
}

inline HomotopyProof prove_homotopy(const TraceLedger& ledger, std::size_t depth_cap = kDefaultHomotopyDepth) {
  HomotopyProof proof;
  for (std::size_t j = 1; j <= ledger.n; ++j)
    proof.orders.push_back(prove_order(j, homotopy_coefficients(ledger, j), depth_cap));
  return proof;
}

// ---------------------------------------------------------------------------
// Stabilizer search

/// eps is strictly decreasing along `ordering` (1-based) with eps[ordering[0]-1] = 1.
/// shrink_log[l-1] is the halving exponent used when choosing the (l+1)-th value.
struct Stabilizer {
  std::vector<Rational> eps;
  std::vector<std::size_t> ordering;
  std::vector<std::size_t> shrink_log;
  std::string strategy;
};

struct StabilizerOptions {
  std::size_t max_shrink = 64;
  std::size_t max_ratio_exponent = 12;
  std::size_t max_orderings = 5040;
  std::size_t homotopy_depth = kDefaultHomotopyDepth;
  bool allow_fallback = true;
  SpectralTolerances tols;
};

/// Where the nested construction stopped (level 0 means it completed).
struct NestedAttempt {
  std::optional<Stabilizer> stabilizer;
  std::size_t failed_level = 0;
  std::optional<std::pair<LedgerKey, Rational>> last_violation;
  bool spectral_failure = false;
};

inline ExactMatrix scale_rows(std::span<const Rational> eps, const ExactMatrix& b) {
  ExactMatrix out = b;
  for (std::size_t r = 0; r < b.size(); ++r)
    for (std::size_t c = 0; c < b.size(); ++c) out(r, c) *= eps[r];
  return out;
}

namespace detail {

inline bool numerically_positive_simple(const ExactMatrix& m, const SpectralTolerances& tols) {
  try {
    return positive_simple(eigenvalues(m), tols);
  } catch (const NumericError&) {
    return false;
  }
}

inline std::vector<std::size_t> identity_order(std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), 1);
  return v;
}

}  // namespace detail

/// Level-by-level halving: eps_1 = 1 and eps_{l+1} = eps_l / 2^s for the first
/// s admitted. A trial fills eps_{l+2..n} with the same ratio and must make
/// every ledger entry with 1 <= k, m and max(k, m) <= l positive (all entries
/// at the last level) and give diag(eps_1..eps_{l+1}) * B[1..l+1] a positive
/// simple spectrum.
inline NestedAttempt nested_stabilizer(const ExactMatrix& b, const LedgerEvaluator& eval,
                                       const StabilizerOptions& opt = {}) {
  const std::size_t n = b.size();
  NestedAttempt out;
  std::vector<Rational> eps{Rational(1)};
  std::vector<std::size_t> log;

  auto violation = [&](const TraceLedger& led, std::size_t bound) -> std::optional<std::pair<LedgerKey, Rational>> {
    for (const auto& [key, v] : led.entries)
      if (key.k >= 1 && key.m >= 1 && std::max(key.k, key.m) <= bound && v.sign() <= 0) return std::pair{key, v};
    return std::nullopt;
  };

  if (n == 1) {
    const auto led = eval.ledger(eps);
    if (auto v = violation(led, 1); v || !detail::numerically_positive_simple(b, opt.tols)) {
      out.failed_level = 1;
      out.last_violation = v;
      out.spectral_failure = !v;
      return out;
    }
    out.stabilizer = Stabilizer{eps, {1}, {}, "nested"};
    return out;
  }

  for (std::size_t l = 1; l < n; ++l) {
    bool accepted = false;
    for (std::size_t s = 1; s <= opt.max_shrink && !accepted; ++s) {
      const Rational ratio = pow2(-static_cast<long>(s));
      std::vector<Rational> trial = eps;
      while (trial.size() < n) trial.push_back(trial.back() * ratio);
      const auto led = eval.ledger(trial);
      const std::size_t bound = l + 1 == n ? n : l;
      if (auto v = violation(led, bound)) {
        out.last_violation = v;
        out.spectral_failure = false;
        continue;
      }
      const IndexSet head = IndexSet::range(n, 1, l + 1);
      const ExactMatrix block = scale_rows(std::span(trial).first(l + 1), principal_submatrix(b, head));
      if (!detail::numerically_positive_simple(block, opt.tols)) {
        out.spectral_failure = true;
        continue;
      }
      eps.push_back(trial[l]);
      log.push_back(s);
      accepted = true;
    }
    if (!accepted) {
      out.failed_level = l;
      return out;
    }
  }
  out.last_violation.reset();
  out.spectral_failure = false;
  out.stabilizer = Stabilizer{eps, detail::identity_order(n), log, "nested"};
  return out;
}

/// A candidate is accepted when diag(eps) * B is numerically positive simple
/// and every homotopy polynomial of its ledger is proven positive on [0,1].
inline bool stabilizer_certifies(const ExactMatrix& b, const LedgerEvaluator& eval, const Stabilizer& st,
                                 const StabilizerOptions& opt) {
  if (!detail::numerically_positive_simple(scale_rows(st.eps, b), opt.tols)) return false;
  return prove_homotopy(eval.ledger(st.eps), opt.homotopy_depth).proven();
}

/// Geometric candidate eps_{sigma(i)} = 2^(-s (i-1)).
inline Stabilizer geometric_stabilizer(const std::vector<std::size_t>& ordering, std::size_t s) {
  const std::size_t n = ordering.size();
  Stabilizer st;
  st.eps.assign(n, Rational(0));
  for (std::size_t i = 0; i < n; ++i) st.eps[ordering[i] - 1] = pow2(-static_cast<long>(s * i));
  st.ordering = ordering;
  st.shrink_log.assign(n - 1, s);
  st.strategy = "geometric";
  return st;
}

/// The nested construction first; if its homotopy proof does not go through,
/// geometric candidates over orderings (lexicographic, identity first) and
/// exponents 1..max_ratio_exponent.
inline Stabilizer build_stabilizer(const ExactMatrix& b, const StabilizerOptions& opt = {}) {
  const std::size_t n = b.size();
  if (auto p = is_P(b); !p) throw CertificationError(FailureKind::not_p, "stabilizer target is not a P-matrix", p.witness);
  const LedgerEvaluator eval(b);
  const NestedAttempt nested = nested_stabilizer(b, eval, opt);
  if (nested.stabilizer && stabilizer_certifies(b, eval, *nested.stabilizer, opt)) return *nested.stabilizer;

  std::size_t tried = 0;
  if (opt.allow_fallback) {
    std::vector<std::size_t> sigma = detail::identity_order(n);
    std::size_t orderings = 0;
    do {
      for (std::size_t s = 1; s <= opt.max_ratio_exponent; ++s) {
        ++tried;
        Stabilizer st = geometric_stabilizer(sigma, s);
        if (stabilizer_certifies(b, eval, st, opt)) return st;
      }
    } while (++orderings < opt.max_orderings && std::next_permutation(sigma.begin(), sigma.end()));
  }

  std::string what = "stabilizer search exhausted: ";
  if (nested.stabilizer) {
    what += "nested construction completed but its homotopy proof failed";
  } else {
    what += "nested construction stopped at level " + std::to_string(nested.failed_level);
    if (nested.last_violation)
      what += " (entry " + nested.last_violation->first.str() + " = " +
              to_canonical_string(nested.last_violation->second) + ")";
    else if (nested.spectral_failure)
      what += " (leading block spectrum not positive simple)";
  }
  what += "; " + std::to_string(tried) + " geometric candidates rejected";
  throw CertificationError(FailureKind::stabilizer_inconclusive, what);
}

/// The ledger of D over B; see prove_homotopy for what certifies it.
inline TraceLedger homotopy_certificate(const ExactMatrix& b, const Stabilizer& d) {
  return LedgerEvaluator(b).ledger(d.eps);
}

/// (tI + (1-t)D) * B.
inline ExactMatrix homotopy_matrix(const ExactMatrix& b, std::span<const Rational> eps, const Rational& t) {
  std::vector<Rational> d(eps.size());
  for (std::size_t i = 0; i < eps.size(); ++i) d[i] = t + (1 - t) * eps[i];
  return scale_rows(d, b);
}

// ---------------------------------------------------------------------------
// Top-level certification

struct CertifyOptions {
  StabilizerOptions stabilizer;
  /// Slack allowed on the numeric wedge check.
  double spectral_slack = 1e-9;
};

struct StabilityCertificate {
  ExactMatrix A{1};
  ClassReport report;
  NestCertificate nest;
  Transform transform{{}, ExactMatrix(1), ExactMatrix(1)};
  BlockTraces block_trace_values;
  Stabilizer stabilizer;
  TraceLedger trace_ledger;
  HomotopyProof homotopy;
  Spectrum spectrum_A;
  Spectrum spectrum_DB;
  SpectralTolerances tolerances;
  double spectral_slack = 0;
  WedgeResult wedge;
};

inline StabilityCertificate certify_stability(const ExactMatrix& a, const CertifyOptions& opt = {}) {
  const std::size_t n = a.size();
  StabilityCertificate cert;
  cert.A = a;
  cert.report = classify_full(a);
  if (!cert.report.p) throw CertificationError(FailureKind::not_p, "matrix is not a P-matrix", cert.report.p.witness);
  if (!cert.report.q2)
    throw CertificationError(FailureKind::not_q2, "matrix is not a Q^2-matrix", cert.report.q2.witness);

  auto nest = find_q2_nest(a);
  if (!nest) throw CertificationError(FailureKind::no_nest, "no nested sequence of Q^2 principal submatrices");
  cert.nest = std::move(*nest);
  cert.transform = build_B(a, cert.nest);
  const ExactMatrix& b = cert.transform.B;

  cert.block_trace_values = block_traces(b);
  for (const auto& [key, v] : cert.block_trace_values)
    if (v.sign() <= 0)
      throw CertificationError(FailureKind::internal, "block trace (" + std::to_string(key.first) + "," +
                                                          std::to_string(key.second) + ") is not positive");

  cert.stabilizer = build_stabilizer(b, opt.stabilizer);
  cert.trace_ledger = homotopy_certificate(b, cert.stabilizer);
  cert.homotopy = prove_homotopy(cert.trace_ledger, opt.stabilizer.homotopy_depth);
  if (!cert.homotopy.proven())
    throw CertificationError(FailureKind::internal, "accepted stabilizer lost its homotopy proof");

  cert.tolerances = opt.stabilizer.tols;
  cert.spectral_slack = opt.spectral_slack;
  try {
    cert.spectrum_A = eigenvalues(a);
    cert.spectrum_DB = eigenvalues(scale_rows(cert.stabilizer.eps, b));
  } catch (const NumericError& e) {
    throw CertificationError(FailureKind::numeric_breach, e.what());
  }
  if (!positive_simple(cert.spectrum_DB, cert.tolerances))
    throw CertificationError(FailureKind::numeric_breach, "spectrum of D*B is not positive simple");
  if (!is_positively_stable(cert.spectrum_A))
    throw CertificationError(FailureKind::numeric_breach, "an eigenvalue of A has nonpositive real part");
  cert.wedge = wedge_check(cert.spectrum_A, n, WedgeKind::sharpened, opt.spectral_slack);
  if (!cert.wedge.holds)
    throw CertificationError(FailureKind::numeric_breach, "an eigenvalue of A lies outside the sharpened wedge");
  return cert;
}

}  // namespace pstab
