#include <gtest/gtest.h>

#include <set>

#include "generators.hpp"
#include "oracle.hpp"
#include "pstab/fixtures.hpp"
#include "pstab/matrix.hpp"

using namespace pstab;

TEST(Rational, ParsesIntegersFractionsAndDecimals) {
  EXPECT_EQ(parse_rational("7"), Rational(7));
  EXPECT_EQ(parse_rational("-93/5"), Rational(-93, 5));
  EXPECT_EQ(parse_rational("+4/6"), Rational(2, 3));
  EXPECT_EQ(parse_rational("0.1"), Rational(1, 10));
  EXPECT_EQ(parse_rational("-0.25"), Rational(-1, 4));
  EXPECT_EQ(parse_rational(".5"), Rational(1, 2));
  EXPECT_EQ(parse_rational("3."), Rational(3));
  // leading zeros are decimal, not octal
  EXPECT_EQ(parse_rational("010"), Rational(10));
  EXPECT_EQ(parse_rational("08/09"), Rational(8, 9));
}

TEST(Rational, RejectsMalformedText) {
  for (const char* bad : {"", "-", "3/0", "1e5", ".", "1/2/3", "abc", "1.2.3", "--1", "1/-2"})
    EXPECT_THROW(parse_rational(bad), ArgumentError) << bad;
}

TEST(Rational, CanonicalForms) {
  EXPECT_EQ(to_fraction_string(Rational(5491)), "5491/1");
  EXPECT_EQ(to_canonical_string(Rational(5491)), "5491");
  EXPECT_EQ(to_canonical_string(Rational(-186, 10)), "-93/5");
  EXPECT_EQ(to_fraction_string(Rational(0)), "0/1");
  EXPECT_EQ(pow2(-3), Rational(1, 8));
  EXPECT_EQ(pow(Rational(-2, 3), 3), Rational(-8, 27));
}

TEST(Determinant, WorkedExample) {
  EXPECT_EQ(det(fixtures::worked_A()), Rational(5491));
  EXPECT_EQ(oracle::naive_det(fixtures::worked_A()), Rational(5491));
}

TEST(Determinant, IdentityAndOneByOne) {
  for (std::size_t n = 1; n <= 8; ++n) EXPECT_EQ(det(ExactMatrix::identity(n)), 1);
  EXPECT_EQ(det(ExactMatrix{{Rational(-7, 3)}}), Rational(-7, 3));
}

TEST(Determinant, NeedsRowSwaps) {
  ExactMatrix m{{0, 1, 2}, {0, 3, 4}, {5, 6, 7}};
  EXPECT_EQ(det(m), oracle::naive_det(m));
  ExactMatrix z{{0, 1}, {0, 3}};
  EXPECT_EQ(det(z), 0);
}

TEST(Determinant, MatchesLaplaceUpToSeven) {
  gen::Source src(11);
  for (std::size_t n = 1; n <= 7; ++n)
    for (int i = 0; i < (n <= 5 ? 30 : 5); ++i) {
      ExactMatrix m = src.rational_matrix(n);
      EXPECT_EQ(det(m), oracle::naive_det(m)) << "n=" << n;
    }
}

TEST(Determinant, Multiplicative) {
  gen::Source src(12);
  for (int i = 0; i < 100; ++i) {
    ExactMatrix a = src.rational_matrix(5), b = src.rational_matrix(5);
    EXPECT_EQ(det(a * b), det(a) * det(b));
  }
}

TEST(Determinant, TransposeInvariant) {
  gen::Source src(13);
  for (int i = 0; i < 50; ++i) {
    ExactMatrix a = src.rational_matrix(5);
    EXPECT_EQ(det(a.transpose()), det(a));
    IndexSet r(5, {1, 3, 4}), c(5, {2, 3, 5});
    EXPECT_EQ(minor(a, r, c), minor(a.transpose(), c, r));
  }
}

TEST(Minor, WorkedExampleEntry) {
  EXPECT_EQ(minor(fixtures::worked_A(), IndexSet(4, {1, 2, 3}), IndexSet(4, {1, 2, 3})), 383);
}

TEST(Minor, OneByOneIsEntry) {
  const ExactMatrix a = fixtures::worked_A();
  for (std::size_t i = 1; i <= 4; ++i)
    for (std::size_t j = 1; j <= 4; ++j) EXPECT_EQ(minor(a, IndexSet(4, {i}), IndexSet(4, {j})), a(i - 1, j - 1));
}

TEST(Minor, FullSetIsDeterminant) {
  gen::Source src(14);
  ExactMatrix m = src.rational_matrix(5);
  EXPECT_EQ(minor(m, IndexSet::full(5), IndexSet::full(5)), det(m));
}

TEST(Minor, MatchesOracleOnRandomSets) {
  gen::Source src(15);
  for (int i = 0; i < 40; ++i) {
    ExactMatrix m = src.rational_matrix(6);
    const auto rows = lex_unrank(6, 3, static_cast<std::uint64_t>(src.integer(1, 20)));
    const auto cols = lex_unrank(6, 3, static_cast<std::uint64_t>(src.integer(1, 20)));
    std::vector<std::size_t> r0, c0;
    for (auto x : rows) r0.push_back(x - 1);
    for (auto x : cols) c0.push_back(x - 1);
    EXPECT_EQ(minor(m, rows, cols), oracle::naive_minor(m, r0, c0));
  }
}

TEST(Minor, SizeMismatchIsAnArgumentError) {
  EXPECT_THROW(minor(fixtures::worked_A(), IndexSet(4, {1, 2}), IndexSet(4, {1})), ArgumentError);
}

TEST(PrincipalSubmatrix, WorkedExampleBlocks) {
  const ExactMatrix a = fixtures::worked_A();
  EXPECT_EQ(principal_submatrix(a, IndexSet(4, {2, 3, 4})), fixtures::worked_A1());
  EXPECT_EQ(principal_submatrix(a, IndexSet(4, {3, 4})), fixtures::worked_A12());
  EXPECT_EQ(principal_submatrix(a, IndexSet::full(4)), a);
  EXPECT_THROW(principal_submatrix(a, IndexSet(4, {})), ArgumentError);
}

TEST(Inverse, SimpleCases) {
  EXPECT_EQ(inverse(ExactMatrix::identity(4)), ExactMatrix::identity(4));
  std::vector<Rational> d{2, 4};
  std::vector<Rational> di{Rational(1, 2), Rational(1, 4)};
  EXPECT_EQ(inverse(ExactMatrix::diagonal(d)), ExactMatrix::diagonal(di));
  const ExactMatrix a = fixtures::worked_A();
  EXPECT_EQ(inverse(a) * a, ExactMatrix::identity(4));
}

TEST(Inverse, RandomMultiplyBack) {
  gen::Source src(16);
  for (int i = 0; i < 30; ++i) {
    ExactMatrix m = src.invertible_matrix(5);
    EXPECT_EQ(inverse(m) * m, ExactMatrix::identity(5));
    EXPECT_EQ(m * inverse(m), ExactMatrix::identity(5));
  }
}

TEST(Inverse, SingularThrowsWithDeterminantEvidence) {
  ExactMatrix s{{1, 2}, {2, 4}};
  try {
    inverse(s);
    FAIL() << "expected SingularMatrixError";
  } catch (const SingularMatrixError& e) {
    EXPECT_NE(std::string(e.what()).find("determinant = 0"), std::string::npos);
  }
}

TEST(IndexSets, LexRankExamples) {
  EXPECT_EQ(lex_rank(IndexSet(4, {1, 2})), 1u);
  EXPECT_EQ(lex_rank(IndexSet(4, {3, 4})), 6u);
  EXPECT_EQ(lex_unrank(4, 2, 2), IndexSet(4, {1, 3}));
  EXPECT_THROW(lex_unrank(4, 2, 0), ArgumentError);
  EXPECT_THROW(lex_unrank(4, 2, 7), ArgumentError);
  EXPECT_THROW(IndexSet(4, {2, 2}), ArgumentError);
  EXPECT_THROW(IndexSet(4, {5}), ArgumentError);
}

TEST(IndexSets, RoundTripAllSizes) {
  for (std::size_t n = 1; n <= 10; ++n)
    for (std::size_t k = 0; k <= n; ++k) {
      const auto all = k_subsets(n, k);
      ASSERT_EQ(all.size(), binomial(n, k));
      for (std::size_t r = 0; r < all.size(); ++r) {
        EXPECT_EQ(all[r].rank(), r + 1);
        EXPECT_EQ(lex_unrank(n, k, r + 1), all[r]);
      }
    }
}

TEST(IndexSets, EightChooseFourBijection) {
  std::set<std::vector<std::size_t>> seen;
  for (std::uint64_t r = 1; r <= binomial(8, 4); ++r) {
    const auto s = lex_unrank(8, 4, r);
    EXPECT_EQ(lex_rank(s), r);
    seen.insert(s.indices());
  }
  EXPECT_EQ(seen.size(), 70u);
}

TEST(Trace, WorkedExampleSquares) {
  const ExactMatrix a = fixtures::worked_A();
  EXPECT_EQ(trace(a * a), 156);
  const auto d = fixtures::worked_D();
  const ExactMatrix da = ExactMatrix::diagonal(d) * a;
  EXPECT_EQ(da, fixtures::worked_DA());
  EXPECT_EQ(da * da, fixtures::worked_DA_squared());
  EXPECT_EQ(trace(da * da), Rational(-93, 5));
}

TEST(AbsMatrix, NonnegativeUnchangedAndSignsDropped) {
  ExactMatrix p{{1, 2}, {0, Rational(1, 3)}};
  EXPECT_EQ(abs_matrix(p), p);
  ExactMatrix q{{-1, 2}, {Rational(-1, 3), 0}};
  EXPECT_EQ(abs_matrix(q), (ExactMatrix{{1, 2}, {Rational(1, 3), 0}}));
}

TEST(PermutationSimilarity, MovesEntries) {
  const ExactMatrix a = fixtures::worked_A();
  const std::vector<std::size_t> theta{2, 3, 4, 1};
  const ExactMatrix r = permutation_similarity(a, theta);
  for (std::size_t p = 0; p < 4; ++p)
    for (std::size_t q = 0; q < 4; ++q) EXPECT_EQ(r(theta[p] - 1, theta[q] - 1), a(p, q));
  EXPECT_EQ(det(r), det(a));
  EXPECT_THROW(permutation_similarity(a, {1, 1, 2, 3}), ArgumentError);
}
