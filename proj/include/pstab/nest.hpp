#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "pstab/classify.hpp"
#include "pstab/errors.hpp"
#include "pstab/index_set.hpp"
#include "pstab/matrix.hpp"
#include "pstab/rational.hpp"

namespace pstab {

/// Order sums of one principal submatrix of the chain and of its square.
struct LevelEvidence {
  IndexSet set;
  std::vector<Rational> order_sums;
  std::vector<Rational> square_order_sums;
};

/// chain[k-1] = S_k with |S_k| = k and S_n = [n]. tau lists the elements in
/// the order the chain acquires them: S_k = {tau[0], ..., tau[k-1]}.
struct NestCertificate {
  std::vector<IndexSet> chain;
  std::vector<std::size_t> tau;
  std::vector<LevelEvidence> evidence;
};

/// First failing (level, order) found scanning levels from the innermost set.
struct NestViolation {
  std::size_t level = 0;
  std::size_t order = 0;
  bool on_square = false;
  Rational value;
};

struct NestVerification {
  std::vector<LevelEvidence> evidence;
  std::optional<NestViolation> violation;
  bool ok() const { return !violation.has_value(); }
};

/// Per-subset Q^2 verdicts keyed by bitmask. A verdict depends on the set
/// only, so entries never go stale.
class Q2Memo {
 public:
  explicit Q2Memo(const ExactMatrix& m) : m_(&m) {}

  bool is_q2(const IndexSet& s) {
    auto [it, inserted] = memo_.try_emplace(s.mask(), false);
    if (inserted) it->second = pstab::is_Q2(principal_submatrix(*m_, s)).holds;
    return it->second;
  }

  std::size_t evaluations() const { return memo_.size(); }

 private:
  const ExactMatrix* m_;
  std::unordered_map<std::uint64_t, bool> memo_;
};

namespace detail {

inline LevelEvidence level_evidence(const ExactMatrix& m, const IndexSet& s) {
  const auto cs = all_compounds(principal_submatrix(m, s));
  return {s, traces(cs), square_traces(cs)};
}

inline void require_chain(const std::vector<IndexSet>& chain, std::size_t n) {
  if (chain.size() != n) throw ArgumentError("chain must have one set per size 1..n");
  for (std::size_t k = 0; k < n; ++k) {
    const auto& s = chain[k];
    if (s.ambient() != n || s.size() != k + 1)
      throw ArgumentError("chain level " + std::to_string(k + 1) + " has the wrong size");
    if (k > 0)
      for (auto i : chain[k - 1])
        if (!s.contains(i)) throw ArgumentError("chain is not nested at level " + std::to_string(k + 1));
  }
}

// `dead` holds Q^2 sets already known to have no Q^2 chain below them.
inline bool q2_descent(Q2Memo& memo, const IndexSet& s, std::vector<IndexSet>& path,
                       std::unordered_map<std::uint64_t, bool>& dead) {
  path.push_back(s);
  if (s.size() == 1) return true;
  for (auto i : s) {
    IndexSet t = s.without(i);
    if (dead.count(t.mask()) || !memo.is_q2(t)) continue;
    if (q2_descent(memo, t, path, dead)) return true;
  }
  dead[s.mask()] = true;
  path.pop_back();
  return false;
}

}  // namespace detail

/// tau from a chain: tau[k-1] is the element of S_k not in S_{k-1}.
inline std::vector<std::size_t> tau_from_chain(const std::vector<IndexSet>& chain) {
  const std::size_t n = chain.size();
  detail::require_chain(chain, n);
  std::vector<std::size_t> tau;
  for (std::size_t k = 0; k < n; ++k)
    for (auto i : chain[k])
      if (k == 0 || !chain[k - 1].contains(i)) tau.push_back(i);
  return tau;
}

inline std::vector<IndexSet> chain_from_tau(const std::vector<std::size_t>& tau) {
  const std::size_t n = tau.size();
  require_permutation(tau, n);
  std::vector<IndexSet> chain;
  IndexSet s(n, {});
  for (auto i : tau) {
    s = s.with(i);
    chain.push_back(s);
  }
  return chain;
}

/// Re-derives the evidence for a supplied chain. The violation, if any, is the
/// lowest level whose submatrix or square has a nonpositive order sum, and
/// within it the lowest order (the submatrix before its square).
inline NestVerification verify_nest(const ExactMatrix& m, const std::vector<IndexSet>& chain) {
  detail::require_chain(chain, m.size());
  NestVerification out;
  for (std::size_t k = 0; k < chain.size(); ++k) {
    out.evidence.push_back(detail::level_evidence(m, chain[k]));
    if (out.violation) continue;
    const auto& ev = out.evidence.back();
    for (bool on_square : {false, true}) {
      const auto& sums = on_square ? ev.square_order_sums : ev.order_sums;
      for (std::size_t j = 0; j < sums.size() && !out.violation; ++j)
        if (sums[j].sign() <= 0) out.violation = NestViolation{k + 1, j + 1, on_square, sums[j]};
      if (out.violation) break;
    }
  }
  return out;
}

/// Depth-first descent from [n], removing the smallest removable index first.
/// Returns the first maximal chain of Q^2 principal submatrices, or nothing.
inline std::optional<NestCertificate> find_q2_nest(const ExactMatrix& m) {
  detail::require_classify_dim(m.size());
  Q2Memo memo(m);
  const IndexSet full = IndexSet::full(m.size());
  if (!memo.is_q2(full)) return std::nullopt;
  std::vector<IndexSet> path;
  std::unordered_map<std::uint64_t, bool> dead;
  if (!detail::q2_descent(memo, full, path, dead)) return std::nullopt;
  std::vector<IndexSet> chain(path.rbegin(), path.rend());
  NestCertificate cert;
  cert.tau = tau_from_chain(chain);
  for (const auto& s : chain) cert.evidence.push_back(detail::level_evidence(m, s));
  cert.chain = std::move(chain);
  return cert;
}

namespace detail {

inline bool positive_ascent(const detail::IntegerImage& image, std::size_t n, const IndexSet& s,
                            std::vector<std::size_t>& order,
                            std::unordered_map<std::uint64_t, bool>& dead) {
  if (s.size() == n) return true;
  if (dead.count(s.mask())) return false;
  for (std::size_t i = 1; i <= n; ++i) {
    if (s.contains(i)) continue;
    IndexSet t = s.with(i);
    if (dead.count(t.mask()) || image.minor(t, t).sign() <= 0) continue;
    order.push_back(i);
    if (positive_ascent(image, n, t, order, dead)) return true;
    order.pop_back();
  }
  dead[s.mask()] = true;
  return false;
}

}  // namespace detail

/// An ordering (i_1, ..., i_n) with every minor on {i_1..i_k} positive, found
/// by adding the smallest admissible index first; nothing if none exists.
inline std::optional<std::vector<std::size_t>> find_positive_nest(const ExactMatrix& m) {
  detail::require_classify_dim(m.size());
  const detail::IntegerImage image(m);
  std::vector<std::size_t> order;
  std::unordered_map<std::uint64_t, bool> dead;
  if (!detail::positive_ascent(image, m.size(), IndexSet(m.size(), {}), order, dead))
    return std::nullopt;
  return order;
}

}  // namespace pstab
