#include "doa/annihilating_filter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "doa/errors.hpp"

namespace doa {
namespace {

// Smallest relative singular value accepted in the single-snapshot system.
constexpr double kSingleSnapshotRcond = 1e-12;
// Relative singular value of X' treated as zero by the minimum-norm solve.
constexpr double kMinimumNormRcond = 1e-10;
constexpr int kRefinementSteps = 2;
constexpr double kPhysicalSlack = 1e-6;

AfCoefficients TapsFromTail(const CVector& tail_reversed) {
  // tail_reversed = [F[L-1], ..., F[1]]
  const Eigen::Index n = tail_reversed.size();
  AfCoefficients out;
  out.taps.resize(n + 1);
  out.taps[0] = Complex(1.0, 0.0);
  for (Eigen::Index i = 0; i < n; ++i) out.taps[n - i] = tail_reversed[i];
  return out;
}

void CheckSnapshots(const CMatrix& x) {
  if (x.rows() < 2) throw InvalidArgument("annihilating filter needs at least 2 sensors");
  if (x.cols() < 1) throw InvalidArgument("annihilating filter needs at least one frame");
}

}  // namespace

void AfSettings::Validate() const {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw InvalidArgument("beta must be positive");
  if (model_order && *model_order < 1) throw InvalidArgument("model order must be >= 1");
}

AfCoefficients SolveSingleSnapshot(const CVector& snapshot, int n_sources, SingleSnapshotSystem system) {
  const auto m = static_cast<int>(snapshot.size());
  if (n_sources < 1) throw InvalidArgument("number of sources must be >= 1");
  if (m < 2 * n_sources) {
    throw InvalidArgument("single-snapshot filter needs M >= 2N (M = " + std::to_string(m) +
                          ", N = " + std::to_string(n_sources) + ")");
  }
  const int n = n_sources;
  const int rows = system == SingleSnapshotSystem::kSquare ? n : m - n;
  CMatrix hankel(rows, n);
  CVector rhs(rows);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < n; ++j) hankel(i, j) = snapshot[i + j];
    rhs[i] = -snapshot[i + n];
  }
  Eigen::JacobiSVD<CMatrix> svd(hankel, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (!(sv[0] > 0.0) || sv[n - 1] < kSingleSnapshotRcond * sv[0]) throw NumericError("rank deficient");
  return TapsFromTail(svd.solve(rhs));
}


AfCoefficients SolveMultiSnapshot(const CMatrix& snapshots, RankPolicy policy) {
  CheckSnapshots(snapshots);
  const Eigen::Index m = snapshots.rows();
  // X' = head^T, so X'^H X' = conj(head) head^T and X'^H y = conj(head) y.
  const auto head = snapshots.topRows(m - 1);
  const CMatrix normal = head.conjugate() * head.transpose();
  const CVector rhs = head.conjugate() * snapshots.row(m - 1).transpose();

  Eigen::SelfAdjointEigenSolver<CMatrix> eig(normal);
  if (eig.info() != Eigen::Success) throw NumericError("eigensolver did not converge");
  const RVector& lambda = eig.eigenvalues();  // ascending
  const double hi = lambda[lambda.size() - 1];
  const double lo = lambda[0];
  if (!(hi > 0.0)) throw NumericError("ill-conditioned");
  const bool well_conditioned = lo > 0.0 && hi / lo <= kMaxNormalCondition;
  if (!well_conditioned && policy == RankPolicy::kStrict) throw NumericError("ill-conditioned");
  const CVector target = -snapshots.row(m - 1).transpose();
  if (!well_conditioned) {
    // The normal matrix cannot tell a small singular value of X' from a zero
    // one here; take the minimum-norm solution from X' directly.
    const CMatrix design = head.transpose();
    Eigen::JacobiSVD<CMatrix> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RVector& sv = svd.singularValues();
    const CVector projected = svd.matrixU().adjoint() * target;
    CVector coords = CVector::Zero(sv.size());
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
      if (sv[i] > kMinimumNormRcond * sv[0]) coords[i] = projected[i] / sv[i];
    }
    return TapsFromTail(svd.matrixV() * coords);
  }

  const CMatrix& v = eig.eigenvectors();
  const auto apply_inverse = [&](const CVector& b) {
    const CVector coords = (v.adjoint() * b).cwiseQuotient(lambda.cast<Complex>());
    return CVector(v * coords);
  };
  CVector tail = -apply_inverse(rhs);
  // Forming X'^H X' squares the condition number. Refining against residuals
  // of X' itself recovers most of the lost digits for the same solution.
  for (int step = 0; step < kRefinementSteps; ++step) {
    const CVector residual = target - head.transpose() * tail;
    tail += apply_inverse(head.conjugate() * residual);
  }
  return TapsFromTail(tail);
}

AfCoefficients SolveMultiSnapshot(const SnapshotMatrix& snapshots, RankPolicy policy) {
  return SolveMultiSnapshot(snapshots.data, policy);
}

AfCoefficients SolveMultiSnapshotRidge(const CMatrix& snapshots, double ridge) {
  CheckSnapshots(snapshots);
  if (!(ridge > 0.0)) throw InvalidArgument("ridge must be positive");
  const Eigen::Index m = snapshots.rows();
  const auto head = snapshots.topRows(m - 1);
  CMatrix normal = head.conjugate() * head.transpose();
  normal.diagonal().array() += ridge;
  const CVector rhs = head.conjugate() * snapshots.row(m - 1).transpose();
  Eigen::LLT<CMatrix> llt(normal);
  if (llt.info() != Eigen::Success) throw NumericError("ill-conditioned");
  return TapsFromTail(-llt.solve(rhs));
}

RecursiveAfState InitRecursiveState(int sensors, double ridge) {
  if (sensors < 2) throw InvalidArgument("annihilating filter needs at least 2 sensors");
  if (!(ridge > 0.0)) throw InvalidArgument("ridge must be positive");
  const Eigen::Index n = sensors - 1;
  RecursiveAfState state;
  state.b_inv = CMatrix::Identity(n, n) / ridge;
  state.rhs_acc = CVector::Zero(n);
  state.normal = CMatrix::Identity(n, n) * ridge;
  state.tail = CVector::Zero(n);
  return state;
}

void AfRecursiveUpdateInPlace(RecursiveAfState& state, const CVector& snapshot) {
  const Eigen::Index n = state.b_inv.rows();
  if (snapshot.size() != n + 1) throw InvalidArgument("snapshot length does not match state");
  // Row k of X' is r'^T, so the normal matrix grows by conj(r') r'^T.
  const CVector v = snapshot.head(n).conjugate();
  const CVector b_inv_v = state.b_inv * v;
  const double denom = 1.0 + v.dot(b_inv_v).real();  // v.dot(w) = v^H w
  const CVector gain = b_inv_v / denom;
  // A-priori error of this frame's equation r'^T f = -r_{M-1}. Moving the
  // solution by gain * error equals -b_inv * rhs_acc in exact arithmetic but
  // does not inherit the cancellation of the 1/ridge start in b_inv.
  const Complex error = -snapshot[n] - v.dot(state.tail);
  state.tail += gain * error;
  // Rank-one updates column by column; Eigen's outer-product kernel is several
  // times slower here than plain axpy columns.
  for (Eigen::Index j = 0; j < n; ++j) {
    state.b_inv.col(j) -= gain * std::conj(b_inv_v[j]);
    state.normal.col(j) += v * snapshot[j];  // v^H = r'^T
  }
  state.rhs_acc += v * snapshot[n];
  ++state.frames_seen;
}

RecursiveAfState AfRecursiveUpdate(RecursiveAfState state, const CVector& snapshot) {
  AfRecursiveUpdateInPlace(state, snapshot);
  return state;
}

AfCoefficients FinalizeRecursive(const RecursiveAfState& state) {
  // One refinement step against the accumulated normal equations, O(M^2).
  const CVector residual = -state.rhs_acc - state.normal * state.tail;
  return TapsFromTail(state.tail + state.b_inv * residual);
}

PolynomialRoots AfRoots(const AfCoefficients& coefficients) {
  if (coefficients.length() < 2) throw InvalidArgument("annihilating filter degree must be >= 1");
  return FindRoots(coefficients.taps);
}

RootValidation ValidateRoots(const std::vector<Complex>& roots, const AfSettings& settings) {
  settings.Validate();
  RootValidation out;
  out.residuals.reserve(roots.size());
  for (const Complex& root : roots) {
    const double modulus = std::abs(root);
    const double residual = modulus == 0.0 ? std::numeric_limits<double>::infinity() : std::abs(std::log(modulus));
    out.residuals.push_back(residual);
    if (residual <= settings.beta) out.accepted.push_back(root);
  }
  return out;
}

Angle RootToAngle(const ArrayConfig& config, Complex root) {
  if (root == Complex(0.0, 0.0)) throw NumericError("non-physical root");
  // Re{j log a} = -arg(a)
  const double u = -std::arg(root) / config.NormalizedSpacing();
  if (std::abs(u) > 1.0 + kPhysicalSlack) throw NumericError("non-physical root");
  const double clamped = std::clamp(u, -1.0, 1.0);
  return Angle::Degrees(std::clamp(std::asin(clamped) * 180.0 / std::numbers::pi, -90.0, 90.0));
}

double AnnihilationResidual(const AfCoefficients& coefficients, const CVector& x) {
  const Eigen::Index len = coefficients.taps.size();
  double worst = 0.0;
  for (Eigen::Index i = len - 1; i < x.size(); ++i) {
    Complex acc(0.0, 0.0);
    for (Eigen::Index n = 0; n < len; ++n) acc += coefficients.taps[n] * x[i - n];
    worst = std::max(worst, std::abs(acc));
  }
  return worst;
}

namespace {

AfSolution Finish(const ArrayConfig& config, AfCoefficients coefficients, const AfSettings& settings,
                  bool keep_all_roots) {
  AfSolution out;
  PolynomialRoots roots = AfRoots(coefficients);
  out.coefficients = std::move(coefficients);
  out.roots = std::move(roots.roots);
  out.dropped_zero_roots = roots.dropped_zero_roots;
  out.residuals = ValidateRoots(out.roots, settings).residuals;
  out.accepted.assign(out.roots.size(), false);

  std::vector<std::optional<Angle>> physical(out.roots.size());
  for (std::size_t i = 0; i < out.roots.size(); ++i) {
    try {
      physical[i] = RootToAngle(config, out.roots[i]);
    } catch (const NumericError&) {
      // Outside the visible region; cannot be a source direction.
    }
  }

  if (keep_all_roots) {
    for (std::size_t i = 0; i < out.roots.size(); ++i) out.accepted[i] = physical[i].has_value();
  } else if (settings.model_order) {
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < out.roots.size(); ++i) {
      if (physical[i]) order.push_back(i);
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return out.residuals[a] < out.residuals[b]; });
    order.resize(std::min(order.size(), static_cast<std::size_t>(*settings.model_order)));
    for (std::size_t i : order) out.accepted[i] = true;
  } else {
    for (std::size_t i = 0; i < out.roots.size(); ++i) {
      out.accepted[i] = physical[i].has_value() && out.residuals[i] <= settings.beta;
    }
  }
  for (std::size_t i = 0; i < out.roots.size(); ++i) {
    if (out.accepted[i]) out.angles.push_back(*physical[i]);
  }
  std::sort(out.angles.begin(), out.angles.end());
  return out;
}

}  // namespace

AfSolution AfEstimate(const SnapshotMatrix& snapshots, const AfSettings& settings) {
  snapshots.config.Validate();
  settings.Validate();
  return Finish(snapshots.config, SolveMultiSnapshot(snapshots.data, RankPolicy::kMinimumNorm), settings,
                /*keep_all_roots=*/false);
}

AfSolution AfEstimateSingle(const SnapshotMatrix& snapshots, int n_sources, int frame,
                            const AfSettings& settings, SingleSnapshotSystem system) {
  snapshots.config.Validate();
  settings.Validate();
  if (frame < 0 || frame >= snapshots.frames()) throw InvalidArgument("frame index out of range");
  return Finish(snapshots.config, SolveSingleSnapshot(snapshots.data.col(frame), n_sources, system), settings,
                /*keep_all_roots=*/true);
}

}  // namespace doa
