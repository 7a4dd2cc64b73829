#include "doa/annihilating_filter.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <ranges>

#include <gtest/gtest.h>

#include "doa/errors.hpp"
#include "doa/evaluation.hpp"
#include "oracles.hpp"

namespace doa {
namespace {

constexpr std::uint64_t kSuiteSeed = 8;
const Complex kJ(0.0, 1.0);
const std::vector<double> kFive{-24, -12, 0, 12, 24};

SnapshotMatrix Synth(const ArrayConfig& c, std::vector<double> deg, double snr, std::uint64_t seed,
                     bool noiseless = false, int frames = 100, double alpha = 0.0) {
  Scenario s;
  s.angles = AnglesFromDegrees(deg);
  s.snr_db = snr;
  s.seed = seed;
  s.noiseless = noiseless;
  s.snapshots = frames;
  s.alpha = alpha;
  return SynthSnapshots(c, s);
}

double MaxAngleError(const std::vector<double>& truth, const std::vector<Angle>& est) {
  if (truth.size() != est.size()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) worst = std::max(worst, std::abs(est[i].degrees() - truth[i]));
  return worst;
}

TEST(SingleSnapshot, EndfireTwoSensors) {
  CVector r(2);
  const Complex s(0.7, -0.2);
  r << s, -s;
  const AfCoefficients f = SolveSingleSnapshot(r, 1);
  ASSERT_EQ(f.length(), 2);
  EXPECT_LT(std::abs(f.taps[0] - 1.0), 1e-15);
  EXPECT_LT(std::abs(f.taps[1] - 1.0), 1e-15);
  const auto roots = AfRoots(f).roots;
  ASSERT_EQ(roots.size(), 1u);
  EXPECT_LT(std::abs(roots[0] + 1.0), 1e-15);
}

TEST(SingleSnapshot, BroadsideTwoSensors) {
  CVector r(2);
  r << 2.0, 2.0;
  const AfCoefficients f = SolveSingleSnapshot(r, 1, SingleSnapshotSystem::kSquare);
  EXPECT_LT(std::abs(f.taps[1] + 1.0), 1e-15);
  EXPECT_LT(std::abs(AfRoots(f).roots[0] - 1.0), 1e-15);
}

TEST(SingleSnapshot, NoiselessFiveSourceRoundTrip) {
  const auto c = ArrayConfig::FromWavelengths(11, 0.5);
  const SnapshotMatrix x = Synth(c, kFive, 0.0, 3, true);
  for (auto system : {SingleSnapshotSystem::kAllRows, SingleSnapshotSystem::kSquare}) {
    const AfSolution s = AfEstimateSingle(x, 5, 0, {}, system);
    EXPECT_LT(MaxAngleError(kFive, s.angles), 1e-6);
  }
}

TEST(SingleSnapshot, RankDeficientWhenOverModelled) {
  const auto c = ArrayConfig::FromWavelengths(6, 0.5);
  const SnapshotMatrix x = Synth(c, {10.0}, 0.0, 3, true);
  for (auto system : {SingleSnapshotSystem::kAllRows, SingleSnapshotSystem::kSquare}) {
    try {
      SolveSingleSnapshot(x.data.col(0), 2, system);
      FAIL();
    } catch (const NumericError& e) {
      EXPECT_STREQ(e.what(), "rank deficient");
    }
  }
  EXPECT_THROW(SolveSingleSnapshot(x.data.col(0), 4), InvalidArgument);  // needs M >= 2N
}

TEST(MultiSnapshot, NoiselessBroadsideAnnihilated) {
  const auto c = ArrayConfig::FromWavelengths(6, 0.5);
  for (int k : {1, 3, 50}) {
    const SnapshotMatrix x = Synth(c, {0.0}, 0.0, 5, true, k);
    const AfCoefficients f = SolveMultiSnapshot(x, RankPolicy::kMinimumNorm);
    ASSERT_EQ(f.length(), 6);
    const auto roots = AfRoots(f).roots;
    const double closest = std::ranges::min(roots | std::views::transform([](Complex a) { return std::abs(a - 1.0); }));
    EXPECT_LT(closest, 1e-10) << k;
    for (int j = 0; j < k; ++j) EXPECT_LT(AnnihilationResidual(f, x.data.col(j)), 1e-10);
  }
}

TEST(MultiSnapshot, StrictPolicyRejectsRankDeficiency) {
  const auto c = ArrayConfig::FromWavelengths(6, 0.5);
  const SnapshotMatrix x = Synth(c, {0.0}, 0.0, 5, true, 20);
  try {
    SolveMultiSnapshot(x);
    FAIL();
  } catch (const NumericError& e) {
    EXPECT_STREQ(e.what(), "ill-conditioned");
  }
}

TEST(MultiSnapshot, FullRankMatchesDenseOracle) {
  const auto c = ArrayConfig::FromWavelengths(7, 0.5);
  const SnapshotMatrix x = Synth(c, {-30, 5, 40}, 10.0, 9, false, 40);
  const AfCoefficients f = SolveMultiSnapshot(x);
  const CVector want = oracle::RidgeTaps(x.data, 0.0);
  EXPECT_LT((f.taps - want).norm() / want.norm(), 1e-10);
}

TEST(Recursive, ZeroSnapshotIsANoOp) {
  RecursiveAfState s = InitRecursiveState(4);
  AfRecursiveUpdateInPlace(s, CVector::Zero(4).eval());
  const RecursiveAfState t = AfRecursiveUpdate(s, CVector::Zero(4));
  EXPECT_TRUE(t.b_inv == InitRecursiveState(4).b_inv);
  EXPECT_TRUE(t.rhs_acc == CVector::Zero(3));
  EXPECT_EQ(t.frames_seen, 2);
}

TEST(Recursive, ShermanMorrisonUnitUpdate) {
  RecursiveAfState s = InitRecursiveState(4, 1.0);
  ASSERT_TRUE(s.b_inv == CMatrix::Identity(3, 3));
  CVector r = CVector::Zero(4);
  r[0] = 1.0;
  s = AfRecursiveUpdate(s, r);
  CMatrix want = CMatrix::Identity(3, 3);
  want(0, 0) = 0.5;
  EXPECT_LT((s.b_inv - want).norm(), 1e-15);
}

TEST(Recursive, MatchesRidgeBatchDenseOracle) {
  std::mt19937_64 gen(21);
  for (int trial = 0; trial < 20; ++trial) {
    const int m = 3 + trial % 9;
    const auto c = ArrayConfig::FromWavelengths(m, 0.5);
    const SnapshotMatrix x = Synth(c, oracle::SeparatedAngles(gen, std::max(1, m / 2), 0.1), 15.0, trial + 1, false, 4 * m);
    RecursiveAfState s = InitRecursiveState(m);
    for (int k = 0; k < x.frames(); ++k) AfRecursiveUpdateInPlace(s, x.data.col(k));
    const CVector got = FinalizeRecursive(s).taps;
    const CVector want = oracle::RidgeTaps(x.data, kDefaultRidge);
    EXPECT_LT((got - want).norm() / want.norm(), 1e-8) << "M=" << m;
    EXPECT_LT((got - SolveMultiSnapshotRidge(x.data, kDefaultRidge).taps).norm() / want.norm(), 1e-8);
  }
}

TEST(AfRoots, Examples) {
  AfCoefficients f{CVector(2)};
  f.taps << 1.0, -1.0;
  ASSERT_EQ(AfRoots(f).roots.size(), 1u);
  EXPECT_EQ(AfRoots(f).roots[0], Complex(1.0, 0.0));
  f.taps.resize(3);
  f.taps << 1.0, 0.0, 1.0;
  const auto r = AfRoots(f).roots;
  ASSERT_EQ(r.size(), 2u);
  EXPECT_LT(std::abs(r[0] + kJ), 1e-14);
  EXPECT_LT(std::abs(r[1] - kJ), 1e-14);
}

TEST(ValidateRoots, Examples) {
  const AfSettings s;
  const double theta = 2.1;
  const auto v = ValidateRoots({1.0, 1.05, std::polar(1.0, theta), 0.0}, s);
  ASSERT_EQ(v.residuals.size(), 4u);
  EXPECT_EQ(v.residuals[0], 0.0);
  EXPECT_NEAR(v.residuals[1], 0.0488, 1e-4);
  EXPECT_NEAR(v.residuals[1], std::log(1.05), 1e-15);
  EXPECT_LT(v.residuals[2], 1e-15);
  EXPECT_TRUE(std::isinf(v.residuals[3]));
  ASSERT_EQ(v.accepted.size(), 2u);
  EXPECT_EQ(v.accepted[0], Complex(1.0, 0.0));
}

TEST(AfSettings, BetaMustBePositive) {
  AfSettings s;
  s.beta = 0.0;
  EXPECT_THROW(s.Validate(), InvalidArgument);
}

TEST(RootToAngle, Examples) {
  const auto c = ArrayConfig::FromWavelengths(11, 0.5);
  EXPECT_EQ(RootToAngle(c, 1.0).degrees(), 0.0);
  EXPECT_NEAR(RootToAngle(c, -kJ).degrees(), 30.0, 1e-12);
  EXPECT_NEAR(RootToAngle(c, oracle::Root(std::numbers::pi, -24.0)).degrees(), -24.0, 1e-12);
  EXPECT_NEAR(std::abs(RootToAngle(c, -1.0).degrees()), 90.0, 1e-6);  // endfire, either sign
}

TEST(RootToAngle, NonPhysicalRootRejected) {
  const auto c = ArrayConfig::FromWavelengths(11, 0.25);  // rho = pi / 2
  try {
    RootToAngle(c, -1.0);  // u = 2
    FAIL();
  } catch (const NumericError& e) {
    EXPECT_STREQ(e.what(), "non-physical root");
  }
}

TEST(AfEstimate, NoiselessSingleSourceSeparatesSpuriousRoots) {
  const auto c = ArrayConfig::FromWavelengths(11, 0.5);
  const AfSolution s = AfEstimate(Synth(c, {0.0}, 0.0, 4, true));
  ASSERT_EQ(s.angles.size(), 1u);
  EXPECT_NEAR(s.angles[0].degrees(), 0.0, 1e-6);
  ASSERT_EQ(s.roots.size(), 10u);
  int accepted = 0;
  for (std::size_t i = 0; i < s.roots.size(); ++i) {
    if (s.accepted[i]) {
      ++accepted;
      EXPECT_LT(std::abs(s.roots[i] - 1.0), 1e-8);
    } else {
      EXPECT_GT(s.residuals[i], AfSettings{}.beta);
    }
  }
  EXPECT_EQ(accepted, 1);
}

TEST(AfEstimate, AnnihilationIdentityForValidatedAngles) {
  const auto c = ArrayConfig::FromWavelengths(11, 0.5);
  const AfSolution s = AfEstimate(Synth(c, {-50, -3, 17, 62}, 0.0, 2, true));
  ASSERT_EQ(s.angles.size(), 4u);
  for (const Angle& a : s.angles) EXPECT_LT(AnnihilationResidual(s.coefficients, SteeringVector(c, a)), 1e-8);
}

TEST(AfEstimate, NegatedAnglesConjugateTheRoots) {
  const auto c = ArrayConfig::FromWavelengths(11, 0.5);
  const std::vector<double> deg{-35, 8, 21};
  const AfSolution pos = AfEstimate(Synth(c, deg, 0.0, 6, true));
  const AfSolution neg = AfEstimate(Synth(c, {-21, -8, 35}, 0.0, 6, true));
  ASSERT_EQ(pos.roots.size(), neg.roots.size());
  std::vector<Complex> rest = neg.roots;
  for (const Complex& r : pos.roots) {
    auto it = std::min_element(rest.begin(), rest.end(), [&](Complex a, Complex b) {
      return std::abs(a - std::conj(r)) < std::abs(b - std::conj(r));
    });
    EXPECT_LT(std::abs(*it - std::conj(r)), 1e-8);
    rest.erase(it);
  }
}

TEST(AfEstimate, DeterministicForFixedInput) {
  const auto c = ArrayConfig::FromWavelengths(11, 0.5);
  const SnapshotMatrix x = Synth(c, kFive, 30.0, 13);
  const AfSolution a = AfEstimate(x), b = AfEstimate(x);
  EXPECT_EQ(a.roots, b.roots);
  EXPECT_EQ(a.accepted, b.accepted);
}

TEST(AfEstimate, FiveSourcesAt40dB) {
  const auto c = ArrayConfig::FromWavelengths(11, 0.5);
  const AfSolution s = AfEstimate(Synth(c, kFive, 40.0, kSuiteSeed));
  EXPECT_LE(Rmse(AnglesFromDegrees(kFive), s.angles), 0.5);
}

TEST(AfEstimate, TenSourcesAt40dBUseEveryRoot) {
  const auto c = ArrayConfig::FromWavelengths(11, 0.5);
  std::vector<double> deg;
  for (int i = 0; i < 10; ++i) deg.push_back(-60.0 + 120.0 * i / 9);
  const AfSolution s = AfEstimate(Synth(c, deg, 40.0, kSuiteSeed));
  ASSERT_EQ(s.angles.size(), 10u);
  EXPECT_LE(Rmse(AnglesFromDegrees(deg), s.angles), 1.0);
}

TEST(AfEstimate, ThreeSourcesAt20dBOffGrid) {
  const auto c = ArrayConfig::FromWavelengths(11, 0.5);
  const std::vector<double> deg{-40.5, 15.6, 20.2};
  const AfSolution s = AfEstimate(Synth(c, deg, 20.0, kSuiteSeed));
  ASSERT_EQ(s.angles.size(), 3u);
  EXPECT_LT(MaxAngleError(deg, s.angles), 0.2);
}

TEST(AfEstimate, DiffuseNoiseBreaksKnownOrderFilter) {
  const auto c = ArrayConfig::FromWavelengths(11, 0.25);
  AfSettings known;
  known.model_order = 5;
  const AfSolution s = AfEstimate(Synth(c, kFive, 20.0, kSuiteSeed, false, 100, 25.0), known);
  ASSERT_EQ(s.angles.size(), 5u);
  EXPECT_GT(Rmse(AnglesFromDegrees(kFive), s.angles), 10.0);
}

}  // namespace
}  // namespace doa
