#ifndef DOA_ANNIHILATING_FILTER_HPP
#define DOA_ANNIHILATING_FILTER_HPP

#include <optional>
#include <vector>

#include "doa/array_model.hpp"
#include "doa/polynomial.hpp"
#include "doa/signal_synth.hpp"
#include "doa/types.hpp"

namespace doa {

/// Annihilating filter F(z) = sum_n taps[n] z^-n with taps[0] == 1.
///
/// For a noiseless snapshot r_m = sum_n s_n a_n^m the valid part of the
/// convolution taps * r vanishes whenever every a_n is a zero of F(z), so the
/// source directions are read off the roots of the filter.
struct AfCoefficients {
  CVector taps;

  int length() const { return static_cast<int>(taps.size()); }
};

struct AfSettings {
  double beta = 0.02;  // accept a root a when |Re log a| <= beta

  // Known number of sources. When set, the model_order physical roots closest
  // to the unit circle are reported instead of applying the beta test.
  std::optional<int> model_order;

  void Validate() const;
};

enum class SingleSnapshotSystem {
  kSquare,   // the N x N Hankel system on r[0 .. 2N-1]
  kAllRows,  // least squares over all M - N annihilation equations
};

/// Single-snapshot filter of length N + 1. Row i of the Hankel system is
/// [r_i .. r_{i+N-1}] against [F[N] .. F[1]] with right-hand side -r_{i+N}.
/// Both systems coincide when M == 2N and are exact on noiseless data.
/// Requires M >= 2N. Throws NumericError("rank deficient") when singular.
AfCoefficients SolveSingleSnapshot(const CVector& snapshot, int n_sources,
                                   SingleSnapshotSystem system = SingleSnapshotSystem::kAllRows);

enum class RankPolicy {
  kStrict,         // condition number > 1e12 throws NumericError("ill-conditioned")
  kMinimumNorm,    // past that bound, minimum-norm least squares from an SVD of X'
};

inline constexpr double kMaxNormalCondition = 1e12;

/// Least-squares filter of length M over all K frames.
///
/// Row k of X' is the first M-1 sensor values of frame k, paired with
/// [F[M-1] .. F[1]]; the right-hand side is -r_{M-1,k}. The tail solves the
/// normal equations (X'^H X') f = -X'^H y, refined against X'.
AfCoefficients SolveMultiSnapshot(const SnapshotMatrix& snapshots,
                                  RankPolicy policy = RankPolicy::kStrict);
AfCoefficients SolveMultiSnapshot(const CMatrix& snapshots,
                                  RankPolicy policy = RankPolicy::kStrict);

/// Same normal equations with a ridge term: (X'^H X' + ridge I) f = -X'^H y.
AfCoefficients SolveMultiSnapshotRidge(const CMatrix& snapshots, double ridge);

/// Running inverse of the normal matrix, updated one frame at a time by the
/// rank-one Sherman-Morrison identity, plus the running solution carried in
/// recursive-least-squares form. O(M^2) per frame.
struct RecursiveAfState {
  CMatrix b_inv;    // (X'^H X' + ridge I)^{-1}
  CVector rhs_acc;  // X'^H y, y = last sensor of each frame
  CMatrix normal;   // X'^H X' + ridge I
  CVector tail;     // current [F[M-1] .. F[1]]
  int frames_seen = 0;
};

inline constexpr double kDefaultRidge = 1e-6;

/// B_0 = ridge * I, so b_inv starts at I / ridge.
RecursiveAfState InitRecursiveState(int sensors, double ridge = kDefaultRidge);

/// Folds one M-sample snapshot into the state.
RecursiveAfState AfRecursiveUpdate(RecursiveAfState state, const CVector& snapshot);

/// In-place variant of AfRecursiveUpdate.
void AfRecursiveUpdateInPlace(RecursiveAfState& state, const CVector& snapshot);

AfCoefficients FinalizeRecursive(const RecursiveAfState& state);

/// All roots of F(z), i.e. of the polynomial taps[0] z^(L-1) + ... + taps[L-1].
PolynomialRoots AfRoots(const AfCoefficients& coefficients);

struct RootValidation {
  std::vector<Complex> accepted;
  std::vector<double> residuals;  // |Re log a| for every input root, +inf at 0
};

/// Keeps roots within beta of the unit circle in log-modulus.
RootValidation ValidateRoots(const std::vector<Complex>& roots, const AfSettings& settings);

/// u = Re{j log a} / rho, phi = asin(u). |u| up to 1 + 1e-6 is clamped to +-1;
/// beyond that throws NumericError("non-physical root").
Angle RootToAngle(const ArrayConfig& config, Complex root);

/// Max-norm of the valid part of the convolution taps * x.
double AnnihilationResidual(const AfCoefficients& coefficients, const CVector& x);

struct AfSolution {
  AfCoefficients coefficients;
  std::vector<Complex> roots;
  std::vector<double> residuals;  // aligned with roots
  std::vector<bool> accepted;     // aligned with roots
  std::vector<Angle> angles;      // accepted, physical roots only, ascending
  int dropped_zero_roots = 0;
};

/// Multi-snapshot estimator: least-squares filter (minimum-norm when the
/// normal matrix is rank deficient) -> roots -> unit-circle test -> angles.
/// The number of sources is not needed.
AfSolution AfEstimate(const SnapshotMatrix& snapshots, const AfSettings& settings = {});

/// Single-snapshot estimator on frame `frame` of the data. All N physical
/// roots are converted to angles; residuals are still reported.
AfSolution AfEstimateSingle(const SnapshotMatrix& snapshots, int n_sources, int frame = 0,
                            const AfSettings& settings = {},
                            SingleSnapshotSystem system = SingleSnapshotSystem::kAllRows);

}  // namespace doa

#endif  // DOA_ANNIHILATING_FILTER_HPP
