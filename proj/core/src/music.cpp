#include "doa/music.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "doa/errors.hpp"

namespace doa {

SubspaceDecomposition Decompose(const WhitenedCovariance& r_prime, const RMatrix& n_v,
                                int n_sources) {
  const CMatrix& r = r_prime.r_prime;
  const auto m = static_cast<int>(r.rows());
  if (r.cols() != m) throw InvalidArgument("covariance must be square");
  if (n_sources < 1 || n_sources > m - 1) {
    throw InvalidArgument("number of sources must be in [1, M-1], got " + std::to_string(n_sources));
  }
  if (n_v.rows() != m || n_v.cols() != m) throw InvalidArgument("noise correlation size mismatch");

  Eigen::ComplexEigenSolver<CMatrix> solver(r, /*computeEigenvectors=*/true);
  if (solver.info() != Eigen::Success) throw NumericError("eigensolver did not converge");

  const CVector& values = solver.eigenvalues();
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return std::abs(values[a]) > std::abs(values[b]); });

  SubspaceDecomposition out;
  out.eigenvalues.resize(m);
  CMatrix vectors(m, m);
  for (int i = 0; i < m; ++i) {
    out.eigenvalues[i] = values[order[i]];
    vectors.col(i) = solver.eigenvectors().col(order[i]).normalized();
  }
  out.signal = vectors.leftCols(n_sources);
  out.noise = vectors.rightCols(m - n_sources);
  if (n_v.isIdentity(0.0)) {
    out.whitened_noise = out.noise;
  } else {
    Eigen::LLT<CMatrix> llt(n_v.cast<Complex>());
    if (llt.info() != Eigen::Success) throw NumericError("singular noise correlation");
    out.whitened_noise = llt.solve(out.noise);
  }
  return out;
}

std::vector<double> Pseudospectrum::NormalizedDecibels() const {
  std::vector<double> db(power.size());
  if (power.empty()) return db;
  const double peak = *std::max_element(power.begin(), power.end());
  for (std::size_t i = 0; i < power.size(); ++i) db[i] = 10.0 * std::log10(power[i] / peak);
  return db;
}

std::vector<Angle> ScanGrid(double resolution_deg) {
  if (!(resolution_deg > 0.0) || !std::isfinite(resolution_deg)) {
    throw InvalidArgument("grid resolution must be positive");
  }
  const auto steps = static_cast<long>(std::floor(180.0 / resolution_deg + 1e-9));
  std::vector<Angle> grid;
  grid.reserve(static_cast<std::size_t>(steps) + 1);
  for (long i = 0; i <= steps; ++i) {
    grid.push_back(Angle::Degrees(std::min(90.0, -90.0 + static_cast<double>(i) * resolution_deg)));
  }
  return grid;
}

Pseudospectrum ComputePseudospectrum(const ArrayConfig& config,
                                     const SubspaceDecomposition& decomposition,
                                     double resolution_deg) {
  Pseudospectrum out;
  out.resolution_deg = resolution_deg;
  out.grid = ScanGrid(resolution_deg);
  out.power.resize(out.grid.size());
  const CMatrix projector = decomposition.whitened_noise.adjoint();
  for (std::size_t i = 0; i < out.grid.size(); ++i) {
    const double denom = (projector * SteeringVector(config, out.grid[i])).squaredNorm();
    out.power[i] = 1.0 / std::max(denom, kSpectrumFloor);
  }
  return out;
}

PeakSearchResult FindPeaks(const Pseudospectrum& spectrum, int n_sources) {
  if (n_sources < 1) throw InvalidArgument("peak search needs n_sources >= 1");
  const std::vector<double>& p = spectrum.power;
  const std::size_t n = p.size();
  std::vector<std::size_t> maxima;
  for (std::size_t i = 0; i < n && n > 1; ++i) {
    const bool above_left = (i == 0) || p[i] > p[i - 1];
    const bool above_right = (i + 1 == n) || p[i] > p[i + 1];
    if (above_left && above_right) maxima.push_back(i);
  }
  PeakSearchResult out;
  if (maxima.empty()) {
    out.no_peaks = true;
    return out;
  }
  // Grid is ascending, so the stable sort keeps the lower angle first on ties.
  std::stable_sort(maxima.begin(), maxima.end(), [&](std::size_t a, std::size_t b) { return p[a] > p[b]; });
  maxima.resize(std::min(maxima.size(), static_cast<std::size_t>(n_sources)));
  std::sort(maxima.begin(), maxima.end());
  for (std::size_t i : maxima) out.angles.push_back(spectrum.grid[i]);
  return out;
}

MusicResult RunMusic(const SnapshotMatrix& snapshots, const MusicOptions& options) {
  snapshots.config.Validate();
  if (snapshots.sensors() != snapshots.config.sensors) throw InvalidArgument("snapshot rows do not match sensor count");
  const RMatrix n_v = NoiseCorrelation(snapshots.config, options.alpha);
  const WhitenedCovariance r_prime = Whiten(SampleCovariance(snapshots), n_v);
  const SubspaceDecomposition decomposition = Decompose(r_prime, n_v, options.n_sources);
  MusicResult out;
  out.spectrum = ComputePseudospectrum(snapshots.config, decomposition, options.resolution_deg);
  out.peaks = FindPeaks(out.spectrum, options.n_sources);
  return out;
}

std::vector<Angle> MusicEstimate(const SnapshotMatrix& snapshots, const MusicOptions& options) {
  return RunMusic(snapshots, options).peaks.angles;
}

}  // namespace doa
