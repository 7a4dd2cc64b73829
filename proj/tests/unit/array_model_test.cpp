#include "doa/array_model.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/SVD>
#include <gtest/gtest.h>

#include "doa/errors.hpp"
#include "oracles.hpp"

namespace doa {
namespace {

const Complex kJ(0.0, 1.0);

void ExpectNear(const CVector& got, const CVector& want, double tol) {
  ASSERT_EQ(got.size(), want.size());
  for (Eigen::Index i = 0; i < got.size(); ++i) {
    EXPECT_NEAR(std::abs(got[i] - want[i]), 0.0, tol) << "element " << i;
  }
}

TEST(ArrayConfig, HalfWavelengthIsPi) {
  EXPECT_EQ(ArrayConfig::FromWavelengths(11, 0.5).NormalizedSpacing(), std::numbers::pi);
  EXPECT_NEAR(ArrayConfig::FromWavelengths(11, 0.25).NormalizedSpacing(), std::numbers::pi / 2, 1e-15);
}

TEST(ArrayConfig, RejectsInvalidGeometry) {
  EXPECT_THROW(ArrayConfig::FromWavelengths(1, 0.5).Validate(), InvalidArgument);
  EXPECT_THROW(ArrayConfig::FromWavelengths(4, 0.0).Validate(), InvalidArgument);
  EXPECT_THROW(ArrayConfig::FromWavelengths(4, 0.6).Validate(), InvalidArgument);  // aliasing
  ArrayConfig c = ArrayConfig::FromWavelengths(4, 0.5);
  c.wave_speed = -1.0;
  EXPECT_THROW(c.Validate(), InvalidArgument);
  c = ArrayConfig::FromWavelengths(4, 0.5);
  c.omega = std::numeric_limits<double>::infinity();
  EXPECT_THROW(c.Validate(), InvalidArgument);
}

TEST(Angle, RangeChecked) {
  EXPECT_NO_THROW(Angle::Degrees(-90.0));
  EXPECT_NO_THROW(Angle::Degrees(90.0));
  EXPECT_THROW(Angle::Degrees(90.5), InvalidArgument);
  EXPECT_THROW(Angle::Degrees(std::nan("")), InvalidArgument);
  EXPECT_DOUBLE_EQ(Angle::Degrees(30.0).electrical(), std::sin(std::numbers::pi / 6));
}

TEST(SteeringVector, Broadside) {
  const auto c = ArrayConfig::FromWavelengths(4, 0.5);
  ExpectNear(SteeringVector(c, Angle::Degrees(0.0)), CVector::Ones(4), 0.0);
}

TEST(SteeringVector, Endfire) {
  const auto c = ArrayConfig::FromWavelengths(4, 0.5);
  CVector want(4);
  want << 1.0, -1.0, 1.0, -1.0;
  ExpectNear(SteeringVector(c, Angle::Degrees(90.0)), want, 1e-15);
}

TEST(SteeringVector, ThirtyDegrees) {
  const auto c = ArrayConfig::FromWavelengths(4, 0.5);
  CVector want(4);
  want << 1.0, -kJ, -1.0, kJ;
  ExpectNear(SteeringVector(c, Angle::Degrees(30.0)), want, 1e-14);  // sin(30 deg) is not exactly 1/2
}

TEST(SteeringVector, FirstElementExactlyOne) {
  const auto c = ArrayConfig::FromWavelengths(7, 0.3);
  for (double phi : {-71.0, -3.0, 44.0}) EXPECT_EQ(SteeringVector(c, Angle::Degrees(phi))[0], Complex(1.0, 0.0));
}

TEST(SteeringMatrix, Examples) {
  const auto c3 = ArrayConfig::FromWavelengths(3, 0.5);
  const std::vector<Angle> one{Angle::Degrees(0.0)};
  const CMatrix single = SteeringMatrix(c3, one);
  ASSERT_EQ(single.cols(), 1);
  ExpectNear(single.col(0), CVector::Ones(3), 0.0);

  const auto c2 = ArrayConfig::FromWavelengths(2, 0.5);
  const std::vector<Angle> two{Angle::Degrees(0.0), Angle::Degrees(90.0)};
  const CMatrix a = SteeringMatrix(c2, two);
  EXPECT_NEAR(std::abs(a(0, 0) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(a(0, 1) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(a(1, 0) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(a(1, 1) + 1.0), 0.0, 1e-15);
}

TEST(SteeringMatrix, FivePaperAnglesMatchElementwiseOracle) {
  const auto c = ArrayConfig::FromWavelengths(11, 0.5);
  const std::vector<double> deg{-24, -12, 0, 12, 24};
  const CMatrix a = SteeringMatrix(c, AnglesFromDegrees(deg));
  ASSERT_EQ(a.rows(), 11);
  ASSERT_EQ(a.cols(), 5);
  for (int n = 0; n < 5; ++n) ExpectNear(a.col(n), oracle::Steering(11, std::numbers::pi, deg[n]), 1e-12);
  ExpectNear(a.col(2), CVector::Ones(11), 0.0);
}

TEST(SteeringMatrix, EmptyListIsAnError) {
  const auto c = ArrayConfig::FromWavelengths(4, 0.5);
  try {
    SteeringMatrix(c, std::vector<Angle>{});
    FAIL();
  } catch (const InvalidArgument& e) {
    EXPECT_STREQ(e.what(), "no sources");
  }
}

// Unit modulus, conjugate symmetry and Vandermonde rank over random draws.
TEST(SteeringProperties, RandomizedInvariants) {
  std::mt19937_64 gen(99);
  std::uniform_real_distribution<double> spacing(0.05, 0.5);
  std::uniform_int_distribution<int> sensors(2, 24);
  std::uniform_real_distribution<double> angle(-90.0, 90.0);
  for (int trial = 0; trial < 300; ++trial) {
    const auto c = ArrayConfig::FromWavelengths(sensors(gen), spacing(gen));
    const double phi = angle(gen);
    const CVector a = SteeringVector(c, Angle::Degrees(phi));
    const CVector b = SteeringVector(c, Angle::Degrees(-phi));
    for (Eigen::Index m = 0; m < a.size(); ++m) {
      EXPECT_NEAR(std::abs(a[m]), 1.0, 1e-12);
      EXPECT_NEAR(std::abs(b[m] - std::conj(a[m])), 0.0, 1e-12);
    }
  }
  for (int trial = 0; trial < 100; ++trial) {
    const int m = sensors(gen);
    const int n = std::uniform_int_distribution<int>(1, m)(gen);
    const auto c = ArrayConfig::FromWavelengths(m, 0.5);
    const auto deg = oracle::SeparatedAngles(gen, n, 0.02, 89.0);
    ASSERT_EQ(static_cast<int>(deg.size()), n);
    const CMatrix a = SteeringMatrix(c, AnglesFromDegrees(deg));
    Eigen::JacobiSVD<CMatrix> svd(a);
    EXPECT_GT(svd.singularValues()[n - 1], 0.0);
  }
}

}  // namespace
}  // namespace doa
