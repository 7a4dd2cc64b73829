#include "doa/signal_synth.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Cholesky>

#include "doa/errors.hpp"

namespace doa {
namespace {

enum Stream : std::uint64_t { kSourceStream = 1, kNoiseStream = 2 };

CMatrix ComplexNormalMatrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  CMatrix out(rows, cols);
  for (Eigen::Index k = 0; k < cols; ++k) {
    for (Eigen::Index m = 0; m < rows; ++m) out(m, k) = rng.ComplexNormal();
  }
  return out;
}

// Square-root factor G with G G^T = gamma. Pivoted LDL^T tolerates the
// near-singular correlation of densely spaced arrays where plain Cholesky
// would trip over roundoff-level negative pivots.
RMatrix DiffuseFactor(const RMatrix& gamma) {
  Eigen::LDLT<RMatrix> ldlt(gamma);
  if (ldlt.info() != Eigen::Success) throw NumericError("invalid diffuse model");
  RVector d = ldlt.vectorD();
  const double scale = std::max(1.0, d.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    if (d[i] < -1e-10 * scale) throw NumericError("invalid diffuse model");
    d[i] = std::sqrt(std::max(d[i], 0.0));
  }
  RMatrix lower = ldlt.matrixL();
  RMatrix factor = lower * d.asDiagonal();
  return ldlt.transpositionsP().transpose() * factor;
}

}  // namespace

void Scenario::Validate() const {
  if (angles.empty()) throw InvalidArgument("no sources");
  if (snapshots < 1) throw InvalidArgument("snapshot count must be >= 1");
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw InvalidArgument("alpha must be finite and >= 0");
  if (!noiseless && !std::isfinite(snr_db)) throw InvalidArgument("snr_db must be finite (use the noiseless flag)");
  std::vector<Angle> sorted = angles;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw InvalidArgument("source angles must be pairwise distinct");
  }
}

RMatrix DiffuseCorrelation(const ArrayConfig& config) {
  const int m = config.sensors;
  const double rho = config.NormalizedSpacing();
  RMatrix gamma(m, m);
  for (int i = 0; i < m; ++i) {
    for (int k = 0; k < m; ++k) {
      const double x = rho * std::abs(i - k);
      gamma(i, k) = (i == k) ? 1.0 : std::sin(x) / x;
    }
  }
  // sin(n*pi) is ~1e-16, not 0; the half-wavelength field is exactly white.
  for (int i = 0; i < m; ++i) {
    for (int k = 0; k < m; ++k) {
      if (std::abs(gamma(i, k)) < 1e-14) gamma(i, k) = 0.0;
    }
  }
  return gamma;
}

RMatrix NoiseCorrelation(const ArrayConfig& config, double alpha) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw InvalidArgument("alpha must be finite and >= 0");
  const int m = config.sensors;
  if (alpha == 0.0) return RMatrix::Identity(m, m);
  return (alpha * DiffuseCorrelation(config) + RMatrix::Identity(m, m)) / (alpha + 1.0);
}

NoiseModel MakeNoiseModel(const ArrayConfig& config, double snr_db, double alpha) {
  config.Validate();
  NoiseModel model;
  model.alpha = alpha;
  model.sigma2 = std::pow(10.0, -snr_db / 10.0);
  model.gamma = DiffuseCorrelation(config);
  model.n_v = NoiseCorrelation(config, alpha);
  return model;
}

CMatrix SynthSources(const Scenario& scenario, Rng& rng) {
  const auto n = static_cast<Eigen::Index>(scenario.angles.size());
  if (!scenario.coherent) return ComplexNormalMatrix(n, scenario.snapshots, rng);
  const CMatrix draw = ComplexNormalMatrix(n, 1, rng);
  return draw.replicate(1, scenario.snapshots);
}

CMatrix SynthNoise(const NoiseModel& noise, int snapshots, Rng& rng) {
  const Eigen::Index m = noise.gamma.rows();
  CMatrix out = CMatrix::Zero(m, snapshots);
  const double diffuse = noise.DiffusePower();
  const double white = noise.WhitePower();
  if (diffuse > 0.0) {
    const RMatrix factor = std::sqrt(diffuse) * DiffuseFactor(noise.gamma);
    out += factor.cast<Complex>() * ComplexNormalMatrix(m, snapshots, rng);
  }
  if (white > 0.0) out += std::sqrt(white) * ComplexNormalMatrix(m, snapshots, rng);
  return out;
}

SnapshotMatrix SynthSnapshots(const ArrayConfig& config, const Scenario& scenario, const Rng& rng) {
  config.Validate();
  scenario.Validate();
  Rng source_rng = rng.Split(kSourceStream);
  const CMatrix sources = SynthSources(scenario, source_rng);
  SnapshotMatrix out{SteeringMatrix(config, scenario.angles) * sources, config};
  if (!scenario.noiseless) {
    Rng noise_rng = rng.Split(kNoiseStream);
    out.data += SynthNoise(MakeNoiseModel(config, scenario.snr_db, scenario.alpha),
                           scenario.snapshots, noise_rng);
  }
  return out;
}

SnapshotMatrix SynthSnapshots(const ArrayConfig& config, const Scenario& scenario) {
  return SynthSnapshots(config, scenario, Rng(scenario.seed));
}

}  // namespace doa
