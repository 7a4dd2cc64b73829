#include "doa/covariance.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "doa/errors.hpp"

namespace doa {

CovarianceEstimate SampleCovariance(const CMatrix& snapshots) {
  if (snapshots.cols() < 1) throw InvalidArgument("sample covariance needs at least one frame");
  const double k = static_cast<double>(snapshots.cols());
  CMatrix r = snapshots * snapshots.adjoint() / k;
  CMatrix hermitian = (r + r.adjoint()) / 2.0;
  return {std::move(hermitian), static_cast<int>(snapshots.cols())};
}

CovarianceEstimate SampleCovariance(const SnapshotMatrix& snapshots) {
  return SampleCovariance(snapshots.data);
}

WhitenedCovariance Whiten(const CovarianceEstimate& covariance, const RMatrix& n_v) {
  const Eigen::Index m = covariance.r.rows();
  if (n_v.rows() != m || n_v.cols() != m) throw InvalidArgument("noise correlation size mismatch");
  if (n_v.isIdentity(0.0)) return {covariance.r};

  Eigen::SelfAdjointEigenSolver<RMatrix> eig(n_v, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(lo > 0.0) || hi / lo >= 1e12) throw NumericError("singular noise correlation");

  // R N^{-1} = (N^{-1} R^H)^H for symmetric real N.
  Eigen::LLT<CMatrix> llt(n_v.cast<Complex>());
  if (llt.info() != Eigen::Success) throw NumericError("singular noise correlation");
  const CMatrix solved = llt.solve(covariance.r.adjoint());
  return {solved.adjoint()};
}

WhitenedCovariance Whiten(const CovarianceEstimate& covariance, const NoiseModel& noise) {
  return Whiten(covariance, noise.n_v);
}

}  // namespace doa
