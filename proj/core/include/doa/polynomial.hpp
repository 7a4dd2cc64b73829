#ifndef DOA_POLYNOMIAL_HPP
#define DOA_POLYNOMIAL_HPP

#include <vector>

#include "doa/types.hpp"

namespace doa {

struct PolynomialRoots {
  std::vector<Complex> roots;  // ordered by arg() ascending, then modulus
  int dropped_zero_roots = 0;  // trailing coefficients below the underflow floor
};

inline constexpr double kCoefficientUnderflow = 1e-14;

/// Roots of c[0] z^n + c[1] z^(n-1) + ... + c[n] from the eigenvalues of the
/// balanced companion matrix. Trailing coefficients with modulus below
/// kCoefficientUnderflow are stripped (each one is a root at 0) and counted
/// in dropped_zero_roots. Throws InvalidArgument if c[0] == 0 or the degree is
/// below 1.
PolynomialRoots FindRoots(const CVector& coefficients_highest_first);

/// Coefficients, highest degree first, of prod (z - r_i).
CVector PolynomialFromRoots(const std::vector<Complex>& roots);

}  // namespace doa

#endif  // DOA_POLYNOMIAL_HPP
