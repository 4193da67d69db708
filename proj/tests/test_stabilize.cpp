#include <gtest/gtest.h>

#include <numeric>

#include "generators.hpp"
#include "oracle.hpp"
#include "pstab/fixtures.hpp"
#include "pstab/stabilize.hpp"

using namespace pstab;

namespace {

ExactMatrix block_diag(const ExactMatrix& k, const ExactMatrix& n) {
  const std::size_t a = k.size(), b = n.size();
  ExactMatrix m(a + b);
  for (std::size_t r = 0; r < a; ++r)
    for (std::size_t c = 0; c < a; ++c) m(r, c) = k(r, c);
  for (std::size_t r = 0; r < b; ++r)
    for (std::size_t c = 0; c < b; ++c) m(a + r, a + c) = n(r, c);
  return m;
}

ExactMatrix leading_invertible(gen::Source& src, std::size_t n, std::size_t k) {
  for (;;) {
    ExactMatrix m = src.invertible_matrix(n);
    if (det(principal_submatrix(m, IndexSet::range(n, 1, k))) != 0) return m;
  }
}

// brute-force e_k of the values on index set s (0-based)
Rational brute_e(const std::vector<Rational>& v, const std::vector<std::size_t>& s, std::size_t k) {
  Rational total = 0;
  for (const auto& sub : oracle::subsets(s.size(), k)) {
    Rational p = 1;
    for (auto i : sub) p *= v[s[i]];
    total += p;
  }
  return total;
}

Rational product_on(const std::vector<Rational>& v, const std::vector<std::size_t>& s) {
  Rational p = 1;
  for (auto i : s) p *= v[i];
  return p;
}

}  // namespace

TEST(Schur, BlockDiagonalGivesTrailingBlock) {
  ExactMatrix k{{2, 1}, {1, 3}};
  ExactMatrix n{{5, -1, 0}, {2, 7, 1}, {0, 1, 4}};
  EXPECT_EQ(schur_complement(block_diag(k, n), 2), n);
}

TEST(Schur, EntryFormulaAndInverseIdentity) {
  gen::Source src(51);
  for (int i = 0; i < 100; ++i) {
    const std::size_t n = 2 + i % 5;
    const std::size_t k = 1 + i % (n - 1);
    ExactMatrix m = leading_invertible(src, n, k);
    const ExactMatrix s = schur_complement(m, k);
    EXPECT_EQ(s, schur_complement_by_minors(m, k));
    EXPECT_EQ(inverse(s), principal_submatrix(inverse(m), IndexSet::range(n, k + 1, n)));
  }
}

TEST(Schur, Errors) {
  EXPECT_THROW(schur_complement(ExactMatrix::identity(3), 0), ArgumentError);
  EXPECT_THROW(schur_complement(ExactMatrix::identity(3), 3), ArgumentError);
  EXPECT_THROW(schur_complement(ExactMatrix{{0, 1}, {1, 0}}, 1), SingularMatrixError);
}

TEST(Schur, CompoundOfSchurComplement) {
  gen::Source src(52);
  for (int i = 0; i < 100; ++i) {
    const std::size_t n = 2 + i % 4;
    const std::size_t m = 1 + i % (n - 1);
    ExactMatrix b = leading_invertible(src, n, m);
    const ExactMatrix s = schur_complement(b, m);
    const Rational lead = det(principal_submatrix(b, IndexSet::range(n, 1, m)));
    for (std::size_t j = m + 1; j <= n; ++j)
      EXPECT_EQ(lead * compound(s, j - m).data, compound_block(b, j, m));
    EXPECT_EQ(compound_block(b, m, m), ExactMatrix{{lead}});
  }
}

TEST(Sylvester, EmptyPivotIsTheMatrixItself) {
  gen::Source src(53);
  ExactMatrix m = src.rational_matrix(4);
  const IndexSet none(4, {});
  EXPECT_EQ(bordered_minor_matrix(m, none, none), m);
  for (std::size_t p = 1; p <= 4; ++p) EXPECT_TRUE(sylvester_check(m, none, none, p).holds);
}

TEST(Sylvester, RandomInstances) {
  gen::Source src(54);
  const auto r = sylvester_check(src.rational_matrix(5), IndexSet(5, {2, 4}), IndexSet(5, {1, 5}), 2);
  EXPECT_TRUE(r.holds);
  EXPECT_EQ(r.checked, 9u);
  for (int i = 0; i < 100; ++i) {
    const std::size_t n = 2 + i % 5;
    const std::size_t k = i % std::min<std::size_t>(4, n);
    ExactMatrix m = src.rational_matrix(n, 5, 3);
    const auto rows = k_subsets(n, k);
    const auto cols = rows;
    const IndexSet pr = k ? rows[i % rows.size()] : IndexSet(n, {});
    const IndexSet pc = k ? cols[(3 * i) % cols.size()] : IndexSet(n, {});
    const std::size_t p = 1 + i % (n - k);
    const auto res = sylvester_check(m, pr, pc, p);
    EXPECT_TRUE(res.holds) << "n=" << n << " k=" << k << " p=" << p;
  }
}

TEST(Sylvester, WorkedExamplePivotOne) {
  const IndexSet one(4, {1});
  const auto r = sylvester_check(fixtures::worked_A(), one, one, 3);
  EXPECT_TRUE(r.holds);
  EXPECT_EQ(r.checked, 1u);
}

TEST(Sylvester, PivotTooLarge) {
  EXPECT_THROW(sylvester_check(ExactMatrix::identity(2), IndexSet(2, {1, 2}), IndexSet(2, {1, 2}), 1),
               ArgumentError);
  EXPECT_THROW(sylvester_check(ExactMatrix::identity(3), IndexSet(3, {1}), IndexSet(3, {1}), 3), ArgumentError);
}

TEST(BuildB, WorkedExampleHasIdentityTheta) {
  const ExactMatrix a = fixtures::worked_A();
  const auto nest = find_q2_nest(a);
  ASSERT_TRUE(nest);
  const Transform t = build_B(a, *nest);
  EXPECT_EQ(t.theta, (std::vector<std::size_t>{1, 2, 3, 4}));
  EXPECT_EQ(t.B, inverse(a));
  EXPECT_EQ(t.permuted_A, a);
  EXPECT_TRUE(is_P(t.B).holds);
  EXPECT_TRUE(is_Q2(t.B).holds);
  for (const auto& [key, v] : block_traces(t.B)) EXPECT_GT(v, 0) << key.first << "," << key.second;
}

TEST(BuildB, IdentityAndThetaRule) {
  const auto nest = find_q2_nest(ExactMatrix::identity(4));
  EXPECT_EQ(build_B(ExactMatrix::identity(4), *nest).B, ExactMatrix::identity(4));
  EXPECT_EQ(theta_from_tau({2, 4, 1, 3}), (std::vector<std::size_t>{2, 4, 1, 3}));
  EXPECT_EQ(theta_from_tau({1, 2, 3}), (std::vector<std::size_t>{3, 2, 1}));
}

TEST(BuildB, SignSymmetricBlockTracesPositive) {
  gen::Source src(55);
  for (int i = 0; i < 8; ++i) {
    ExactMatrix a = src.gram_plus_diagonal(4 + i % 2);
    const auto nest = find_q2_nest(a);
    ASSERT_TRUE(nest);
    const Transform t = build_B(a, *nest);
    for (const auto& [key, v] : block_traces(t.B)) EXPECT_GT(v, 0);
  }
}

TEST(BlockTraces, IdentityGivesBinomials) {
  const std::size_t n = 5;
  const auto bt = block_traces(ExactMatrix::identity(n));
  EXPECT_EQ(bt.size(), 15u);
  for (const auto& [key, v] : bt) EXPECT_EQ(v, Rational(Integer(binomial(n - key.second, key.first - key.second))));
}

TEST(BlockTraces, DiagonalClosedForm) {
  gen::Source src(56);
  const auto d = src.positive_vector(4);
  const auto bt = block_traces(ExactMatrix::diagonal(d));
  for (std::size_t j = 1; j <= 4; ++j)
    for (std::size_t m = 1; m <= j; ++m) {
      Rational expect = 0;
      for (const auto& s : oracle::subsets(4, j)) {
        bool has_head = true;
        for (std::size_t i = 0; i < m; ++i) has_head = has_head && std::find(s.begin(), s.end(), i) != s.end();
        if (has_head) expect += product_on(d, s) * product_on(d, s);
      }
      EXPECT_EQ(bt.at({j, m}), expect);
    }
}

TEST(Ledger, AllOnesGivesSquareOrderSums) {
  const ExactMatrix b = inverse(fixtures::worked_A());
  const auto led = LedgerEvaluator(b).ledger(std::vector<Rational>(4, Rational(1)));
  const auto sq = detail::square_traces(all_compounds(b));
  for (std::size_t j = 1; j <= 4; ++j)
    for (std::size_t k = 0; k <= j; ++k)
      for (std::size_t m = 0; m <= j; ++m) {
        const Rational scale = Rational(Integer(binomial(j, k) * binomial(j, m)));
        EXPECT_EQ(led.at(j, k, m), scale * sq[j - 1]);
      }
  EXPECT_EQ(led.at(2, 2, 2), oracle::naive_order_sum(b * b, 2));
}

TEST(Ledger, DiagonalClosedForm) {
  gen::Source src(57);
  const auto b = src.positive_vector(4);
  const auto eps = src.positive_vector(4);
  const auto led = LedgerEvaluator(ExactMatrix::diagonal(b)).ledger(eps);
  EXPECT_TRUE(led.all_positive());
  for (const auto& [key, v] : led.entries) {
    Rational expect = 0;
    for (const auto& s : oracle::subsets(4, key.j)) {
      const Rational p = product_on(b, s);
      expect += brute_e(eps, s, key.k) * brute_e(eps, s, key.m) * p * p;
    }
    EXPECT_EQ(v, expect) << key.str();
  }
}

TEST(Ledger, MatchesDirectTraceDefinition) {
  gen::Source src(58);
  for (int i = 0; i < 10; ++i) {
    ExactMatrix b = src.rational_matrix(3, 5, 2);
    const auto eps = src.positive_vector(3);
    const auto led = LedgerEvaluator(b).ledger(eps);
    for (std::size_t j = 1; j <= 3; ++j) {
      const ExactMatrix bj = compound(b, j).data;
      for (std::size_t k = 0; k <= j; ++k)
        for (std::size_t m = 0; m <= j; ++m) {
          const ExactMatrix dk = k ? diag_generalized_compound(eps, j, k).data : ExactMatrix::identity(bj.size());
          const ExactMatrix dm = m ? diag_generalized_compound(eps, j, m).data : ExactMatrix::identity(bj.size());
          EXPECT_EQ(led.at(j, k, m), trace(dk * bj * dm * bj));
        }
    }
  }
}

TEST(Ledger, WorkedScalingCannotCertify) {
  const ExactMatrix a = fixtures::worked_A();
  const auto led = LedgerEvaluator(a).ledger(fixtures::worked_D());
  EXPECT_FALSE(led.hypothesis_positive());
  // Tr((DA)^2) is the t = 0 value of the order-1 homotopy polynomial
  EXPECT_EQ(homotopy_value(homotopy_coefficients(led, 1), 0), fixtures::worked_trace_DA_squared);
  EXPECT_EQ(prove_order(1, homotopy_coefficients(led, 1)).status, HomotopyStatus::refuted);
}

TEST(Homotopy, PolynomialDecisions) {
  const auto ok = prove_order(1, {1, -1, 1});
  EXPECT_EQ(ok.status, HomotopyStatus::proven);
  EXPECT_GT(ok.pieces, 1u);

  const auto root = prove_order(1, {1, -2, 1});
  ASSERT_EQ(root.status, HomotopyStatus::refuted);
  EXPECT_EQ(*root.witness_t, Rational(1, 2));
  EXPECT_EQ(*root.witness_value, 0);

  const auto neg = prove_order(1, {1, -3, 1});
  ASSERT_EQ(neg.status, HomotopyStatus::refuted);
  EXPECT_LE(homotopy_value({1, -3, 1}, *neg.witness_t), 0);

  // positive but with a double-root-like dip: (t - u/2)^2 + tiny
  const auto close = prove_order(1, {Rational(1), Rational(-1), Rational(1, 4) + Rational(1, 1000000)}, 4);
  EXPECT_EQ(close.status, HomotopyStatus::undecided);
  EXPECT_EQ(prove_order(1, {Rational(1), Rational(-1), Rational(1, 4) + Rational(1, 1000000)}).status,
            HomotopyStatus::proven);
}

TEST(Homotopy, ValueMatchesDirectTrace) {
  const ExactMatrix b = inverse(fixtures::worked_A());
  const std::vector<Rational> eps{1, Rational(1, 3), Rational(1, 7), Rational(1, 20)};
  const auto led = LedgerEvaluator(b).ledger(eps);
  for (const Rational& t : {Rational(0), Rational(1, 3), Rational(5, 6), Rational(1)}) {
    const ExactMatrix dt = homotopy_matrix(b, eps, t);
    const auto sq = detail::square_traces(all_compounds(dt));
    for (std::size_t j = 1; j <= 4; ++j) EXPECT_EQ(homotopy_value(homotopy_coefficients(led, j), t), sq[j - 1]);
  }
}

TEST(BuildStabilizer, Identity) {
  const Stabilizer st = build_stabilizer(ExactMatrix::identity(4));
  EXPECT_EQ(st.strategy, "nested");
  EXPECT_EQ(st.eps, (std::vector<Rational>{1, Rational(1, 2), Rational(1, 4), Rational(1, 8)}));
  EXPECT_EQ(st.shrink_log, (std::vector<std::size_t>{1, 1, 1}));
}

TEST(BuildStabilizer, WorkedExampleInverse) {
  const ExactMatrix b = inverse(fixtures::worked_A());
  const Stabilizer st = build_stabilizer(b);
  // the nested result fails its homotopy proof here, so the search falls back
  EXPECT_EQ(st.strategy, "geometric");
  EXPECT_EQ(st.eps[st.ordering.front() - 1], 1);
  for (std::size_t i = 0; i + 1 < st.eps.size(); ++i)
    EXPECT_GT(st.eps[st.ordering[i] - 1], st.eps[st.ordering[i + 1] - 1]);
  const LedgerEvaluator eval(b);
  const auto nested = nested_stabilizer(b, eval);
  ASSERT_TRUE(nested.stabilizer);
  const auto nested_ledger = eval.ledger(nested.stabilizer->eps);
  EXPECT_TRUE(nested_ledger.hypothesis_positive());
  EXPECT_LT(nested_ledger.at(1, 0, 1), 0);
  const HomotopyProof nested_proof = prove_homotopy(nested_ledger);
  const auto* bad = nested_proof.first_failure();
  ASSERT_NE(bad, nullptr);
  EXPECT_EQ(bad->status, HomotopyStatus::refuted);
  EXPECT_LE(homotopy_value(bad->coefficients, *bad->witness_t), 0);
  const auto led = homotopy_certificate(b, st);
  EXPECT_TRUE(led.hypothesis_positive());
  EXPECT_TRUE(prove_homotopy(led).proven());
  EXPECT_TRUE(positive_simple(eigenvalues(scale_rows(st.eps, b))));
}

TEST(BuildStabilizer, PositiveDefinite) {
  gen::Source src(59);
  for (int i = 0; i < 4; ++i) {
    const ExactMatrix b = src.gram_plus_diagonal(5);
    const Stabilizer st = build_stabilizer(b);
    EXPECT_TRUE(is_positively_stable(eigenvalues(scale_rows(st.eps, b))));
    EXPECT_TRUE(prove_homotopy(homotopy_certificate(b, st)).proven());
  }
}

TEST(BuildStabilizer, RejectsNonP) {
  try {
    build_stabilizer(ExactMatrix{{1, 2}, {3, 1}});
    FAIL();
  } catch (const CertificationError& e) {
    EXPECT_EQ(e.kind(), FailureKind::not_p);
    EXPECT_TRUE(e.refutes());
  }
}

TEST(BuildStabilizer, InconclusiveWhenSearchIsCapped) {
  // a Q^2 P-matrix whose block traces are fine but whose nested search is
  // denied any halving and whose fallback is disabled
  StabilizerOptions opt;
  opt.max_shrink = 0;
  opt.allow_fallback = false;
  try {
    build_stabilizer(ExactMatrix::identity(3), opt);
    FAIL();
  } catch (const CertificationError& e) {
    EXPECT_EQ(e.kind(), FailureKind::stabilizer_inconclusive);
    EXPECT_FALSE(e.refutes());
    EXPECT_NE(std::string(e.what()).find("level 1"), std::string::npos);
  }
}

TEST(Stabilizer, MonotoneRatioRobustness) {
  // Doubling every consecutive ratio along the ordering of a certifying
  // stabilizer. Checked exactly on the ledger and the homotopy proof, and
  // numerically on the spectrum.
  std::vector<ExactMatrix> bs{inverse(fixtures::worked_A()), ExactMatrix::identity(4)};
  gen::Source src(60);
  for (int i = 0; i < 6; ++i) bs.push_back(src.gram_plus_diagonal(4 + i % 2));
  for (int i = 0; i < 4; ++i)
    if (ExactMatrix m = src.dominant_perturbation(4); is_P(m)) bs.push_back(inverse(m));
  for (const auto& b : bs) {
    const Stabilizer st = build_stabilizer(b);
    std::vector<Rational> eps2(b.size());
    Rational cur = 1;
    eps2[st.ordering[0] - 1] = cur;
    for (std::size_t i = 0; i + 1 < b.size(); ++i) {
      cur *= st.eps[st.ordering[i + 1] - 1] / st.eps[st.ordering[i] - 1] / 2;
      eps2[st.ordering[i + 1] - 1] = cur;
    }
    const auto led = LedgerEvaluator(b).ledger(eps2);
    EXPECT_TRUE(led.hypothesis_positive());
    EXPECT_TRUE(prove_homotopy(led).proven());
    EXPECT_TRUE(positive_simple(eigenvalues(scale_rows(eps2, b))));
  }
}

TEST(Certify, WorkedExample) {
  const auto c = certify_stability(fixtures::worked_A());
  EXPECT_TRUE(c.homotopy.proven());
  EXPECT_TRUE(c.wedge.holds);
  EXPECT_GT(c.wedge.margin, 0);
  EXPECT_TRUE(spectra_match(c.spectrum_A.eigenvalues, fixtures::worked_eigenvalues(), 1e-3).holds);
}

TEST(Certify, Identity) {
  const auto c = certify_stability(ExactMatrix::identity(3));
  EXPECT_EQ(c.transform.B, ExactMatrix::identity(3));
  EXPECT_TRUE(c.homotopy.proven());
}

TEST(Certify, FailureKinds) {
  auto kind_of = [](const ExactMatrix& m) {
    try {
      certify_stability(m);
    } catch (const CertificationError& e) {
      return e.kind();
    }
    return FailureKind::internal;
  };
  EXPECT_EQ(kind_of(ExactMatrix{{1, 2}, {3, 1}}), FailureKind::not_p);
  EXPECT_EQ(kind_of(fixtures::no_q2_nest_3x3()), FailureKind::not_q2);
  try {
    certify_stability(fixtures::not_q2_4x4());
    FAIL();
  } catch (const CertificationError& e) {
    EXPECT_EQ(e.kind(), FailureKind::not_q2);
    ASSERT_TRUE(e.witness());
    EXPECT_EQ(e.witness()->order, 1u);
    EXPECT_EQ(e.witness()->value, fixtures::not_q2_4x4_trace_square);
  }
}

TEST(Certify, HomotopyCorroboratedAtSampledTimes) {
  gen::Source src(61);
  std::vector<ExactMatrix> as{fixtures::worked_A(), src.gram_plus_diagonal(4), src.dominant_perturbation(4)};
  for (const auto& a : as) {
    const auto c = certify_stability(a);
    for (const Rational& t : {Rational(0), Rational(1, 4), Rational(1, 2), Rational(3, 4), Rational(1)})
      EXPECT_TRUE(is_Q2(homotopy_matrix(c.transform.B, c.stabilizer.eps, t)).holds);
  }
}
