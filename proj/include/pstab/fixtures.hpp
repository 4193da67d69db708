#pragma once

#include <complex>
#include <initializer_list>
#include <string>
#include <vector>

#include "pstab/matrix.hpp"
#include "pstab/rational.hpp"

// Literal matrices and values of the 4x4 worked example, plus a few matrices
// found by randomized search and frozen here. Every published value below was
// recomputed by the independent test oracle before being recorded.
namespace pstab::fixtures {

inline ExactMatrix from_text(std::initializer_list<std::initializer_list<const char*>> rows) {
  std::vector<std::vector<Rational>> v;
  for (const auto& row : rows) {
    std::vector<Rational> r;
    for (const char* x : row) r.push_back(parse_rational(x));
    v.push_back(std::move(r));
  }
  return ExactMatrix::from_rows(v);
}

/// Worked example: a P-matrix that is Q^2, not sign-symmetric and not square
/// diagonally dominant, yet positively stable.
inline ExactMatrix worked_A() {
  return {{6, -30, 1, 1}, {1, 2, 1, -5}, {1, 1, 10, -10}, {1, 1, 1, 10}};
}

inline const Rational worked_det_A{5491};

inline ExactMatrix worked_A_compound2() {
  return {{42, 5, -31, -32, 148, -6},   {36, 59, -61, -301, 299, -20}, {36, 5, 59, -31, -301, 9},
          {-1, 9, -5, 19, -15, 40},     {-1, 0, 15, 1, 25, 15},         {0, -9, 20, -9, 20, 110}};
}

inline ExactMatrix worked_A_compound3() {
  return {{383, -241, 254, -1166}, {5, 599, 75, -474}, {-324, 720, 631, -3329}, {9, -20, 135, 245}};
}

inline ExactMatrix worked_A_squared() {
  return {{8, -238, -13, 156}, {4, -30, 8, -69}, {7, -28, 92, -204}, {18, -17, 22, 86}};
}

inline ExactMatrix worked_A_squared_compound2() {
  return {{712, 116, -1176, -2294, 21102, -351},     {1442, 827, -2724, -22260, 52920, -11700},
          {4148, 410, -2120, -5457, -17816, -4550},  {98, 312, -333, -2536, 4188, 4716},
          {472, -56, 1586, -524, -3753, 2206},       {385, -1502, 4274, 948, -5876, 12400}};
}

inline ExactMatrix worked_A_squared_compound3() {
  return {{52694, -30462, 82071, -1463580},
          {-23656, 421076, 29530, -655561},
          {-354897, 1030264, -79550, -2879700},
          {-38188, 78151, 119046, -390404}};
}

/// Order sums of A^2 for orders 1..4 (the last is det A^2).
inline std::vector<Rational> worked_A_squared_order_sums() { return {156, 5530, 3816, 30151081}; }

/// The diagonal scaling that breaks Q-ness of the square.
inline std::vector<Rational> worked_D() { return {1, 1, Rational(1, 10), Rational(1, 10)}; }

inline ExactMatrix worked_DA() {
  return from_text({{"6", "-30", "1", "1"}, {"1", "2", "1", "-5"}, {"0.1", "0.1", "1", "-1"}, {"0.1", "0.1", "0.1", "1"}});
}

inline ExactMatrix worked_DA_squared() {
  return from_text({{"6.2", "-239.8", "-22.9", "156"},
                    {"7.6", "-26.4", "3.5", "-15"},
                    {"0.7", "-2.8", "1.1", "-2.4"},
                    {"0.81", "-2.69", "0.4", "0.5"}});
}

/// Printed as -18.6.
inline const Rational worked_trace_DA_squared{-93, 5};

/// Nest of the worked example, innermost first.
inline std::vector<std::vector<std::size_t>> worked_chain() { return {{4}, {3, 4}, {2, 3, 4}, {1, 2, 3, 4}}; }

inline ExactMatrix worked_A1() { return {{2, 1, -5}, {1, 10, -10}, {1, 1, 10}}; }
inline ExactMatrix worked_A1_squared() { return {{0, 7, -70}, {2, 91, -205}, {13, 21, 85}}; }
inline ExactMatrix worked_A1_squared_compound2() {
  return {{-14, 140, 4935}, {-91, 910, 2065}, {-1141, 2835, 12040}};
}
inline const Rational worked_det_A1_squared{60025};
inline const Rational worked_trace_A1_squared{176};
inline const Rational worked_order2_A1_squared{12936};

inline ExactMatrix worked_A12() { return {{10, -10}, {1, 10}}; }
inline ExactMatrix worked_A12_squared() { return {{90, -200}, {20, 90}}; }
inline const Rational worked_det_A12_squared{12100};
// The text labels this line with the order-2 sum of A1^2; the value is the
// trace of A12^2.
inline const Rational worked_trace_A12_squared{180};

/// Published to about five decimals.
inline std::vector<std::complex<double>> worked_eigenvalues() {
  return {{10.1979, 2.0302}, {10.1979, -2.0302}, {3.80215, 6.02751}, {3.80215, -6.02751}};
}

// -- frozen search results --------------------------------------------------

/// 3x3 P-matrix none of whose 2x2 principal submatrices is Q^2, so no Q^2
/// nest exists. The whole matrix is not Q^2 either.
inline ExactMatrix no_q2_nest_3x3() { return {{4, -7, 7}, {5, 3, 3}, {-3, -3, 1}}; }

/// 4x4 P-matrix with trace(M^2) = -56, so it fails Q^2 at order 1.
inline ExactMatrix not_q2_4x4() { return {{3, 3, -6, 0}, {-4, 3, 1, 2}, {6, -5, 3, -1}, {1, 3, -1, 3}}; }
inline const Rational not_q2_4x4_trace_square{-56};

/// 4x4 matrix with exactly one ordering whose nested minors are all
/// positive: (4, 1, 2, 3).
inline ExactMatrix unique_positive_nest_4x4() {
  return {{-4, -5, -5, 2}, {2, -3, 5, 3}, {-2, 2, 3, -2}, {-3, 1, 5, 1}};
}
inline std::vector<std::size_t> unique_positive_nest_order() { return {4, 1, 2, 3}; }

}  // namespace pstab::fixtures
