#include "doa/polynomial.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "doa/errors.hpp"

namespace doa {
namespace {

// Parlett-Reinsch diagonal similarity scaling by powers of two. Leaves the
// eigenvalues untouched but evens out row/column norms, which keeps the QR
// iterations accurate when coefficients span many orders of magnitude.
void Balance(CMatrix& a) {
  constexpr double kGamma = 0.95;
  const Eigen::Index n = a.rows();
  bool changed = true;
  while (changed) {
    changed = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      double row = 0.0;
      double col = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;
        row += std::abs(a(i, j));
        col += std::abs(a(j, i));
      }
      if (row == 0.0 || col == 0.0) continue;
      int exponent = 0;
      std::frexp(row / col, &exponent);
      exponent /= 2;
      if (exponent == 0) continue;
      const double scaled_col = std::ldexp(col, exponent);
      const double scaled_row = std::ldexp(row, -exponent);
      if (scaled_col + scaled_row < kGamma * (col + row)) {
        changed = true;
        a.row(i) *= std::ldexp(1.0, -exponent);
        a.col(i) *= std::ldexp(1.0, exponent);
      }
    }
  }
}

}  // namespace

PolynomialRoots FindRoots(const CVector& coefficients_highest_first) {
  const CVector& c = coefficients_highest_first;
  if (c.size() < 2) throw InvalidArgument("polynomial degree must be at least 1");
  const Complex lead = c[0];
  if (lead == Complex(0.0, 0.0)) throw InvalidArgument("leading polynomial coefficient is zero");

  PolynomialRoots out;
  Eigen::Index degree = c.size() - 1;
  while (degree > 0 && std::abs(c[degree] / lead) < kCoefficientUnderflow) {
    --degree;
    ++out.dropped_zero_roots;
  }
  if (degree == 0) return out;

  if (degree == 1) {
    out.roots.push_back(-c[1] / lead);
  } else {
    CMatrix companion = CMatrix::Zero(degree, degree);
    companion.diagonal(-1).setOnes();
    for (Eigen::Index i = 0; i < degree; ++i) companion(i, degree - 1) = -c[degree - i] / lead;
    Balance(companion);
    Eigen::ComplexEigenSolver<CMatrix> solver(companion, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) throw NumericError("companion eigensolver did not converge");
    out.roots.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + degree);
  }

  std::sort(out.roots.begin(), out.roots.end(), [](const Complex& a, const Complex& b) {
    const double arg_a = std::arg(a);
    const double arg_b = std::arg(b);
    if (arg_a != arg_b) return arg_a < arg_b;
    return std::abs(a) < std::abs(b);
  });
  return out;
}

CVector PolynomialFromRoots(const std::vector<Complex>& roots) {
  CVector poly = CVector::Zero(static_cast<Eigen::Index>(roots.size()) + 1);
  poly[0] = 1.0;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    const auto deg = static_cast<Eigen::Index>(i) + 1;
    for (Eigen::Index j = deg; j >= 1; --j) poly[j] -= roots[i] * poly[j - 1];
  }
  return poly;
}

}  // namespace doa
