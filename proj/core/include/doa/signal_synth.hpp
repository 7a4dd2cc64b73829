#ifndef DOA_SIGNAL_SYNTH_HPP
#define DOA_SIGNAL_SYNTH_HPP

#include <cstdint>
#include <vector>

#include "doa/array_model.hpp"
#include "doa/rng.hpp"
#include "doa/types.hpp"

namespace doa {

/// Ground truth and noise settings for one synthesized data set.
struct Scenario {
  std::vector<Angle> angles;
  int snapshots = 100;      // K
  double snr_db = 40.0;     // 10*log10(1 / sigma^2), unit power per source
  double alpha = 0.0;       // diffuse-to-white noise power ratio
  std::uint64_t seed = 1;
  bool coherent = false;    // every frame repeats one source draw
  bool noiseless = false;   // exact zero noise, snr_db ignored

  /// Throws InvalidArgument on N < 1, K < 1, alpha < 0 or repeated angles.
  void Validate() const;
};

/// Noise power split and spatial correlation for a given array.
struct NoiseModel {
  double alpha = 0.0;
  double sigma2 = 0.0;  // sigma_d^2 + sigma_w^2
  RMatrix gamma;        // diffuse-field correlation
  RMatrix n_v;          // (alpha * gamma + I) / (alpha + 1)

  double DiffusePower() const { return sigma2 * alpha / (alpha + 1.0); }
  double WhitePower() const { return sigma2 / (alpha + 1.0); }
};

/// Spherically isotropic field: gamma(i, k) = sinc(rho * |i - k|).
RMatrix DiffuseCorrelation(const ArrayConfig& config);

/// Combined noise correlation (alpha * gamma + I) / (alpha + 1). Exactly the
/// identity when alpha == 0.
RMatrix NoiseCorrelation(const ArrayConfig& config, double alpha);

NoiseModel MakeNoiseModel(const ArrayConfig& config, double snr_db, double alpha);

/// N x K source amplitudes, i.i.d. unit-power circular Gaussian (or
/// frame-invariant when the scenario is coherent).
CMatrix SynthSources(const Scenario& scenario, Rng& rng);

/// M x K noise with column covariance sigma_d^2 * gamma + sigma_w^2 * I.
CMatrix SynthNoise(const NoiseModel& noise, int snapshots, Rng& rng);

struct SnapshotMatrix {
  CMatrix data;  // M x K, column k is the array snapshot at frame k
  ArrayConfig config;

  int sensors() const { return static_cast<int>(data.rows()); }
  int frames() const { return static_cast<int>(data.cols()); }
};

/// X = A * S + noise. Sources, diffuse and white noise each draw from their
/// own child stream of `rng`, so a noiseless run with the same seed shares S.
SnapshotMatrix SynthSnapshots(const ArrayConfig& config, const Scenario& scenario, const Rng& rng);

/// Convenience overload seeded from scenario.seed.
SnapshotMatrix SynthSnapshots(const ArrayConfig& config, const Scenario& scenario);

}  // namespace doa

#endif  // DOA_SIGNAL_SYNTH_HPP
