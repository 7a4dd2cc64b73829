#ifndef DOA_MUSIC_HPP
#define DOA_MUSIC_HPP

#include <vector>

#include "doa/array_model.hpp"
#include "doa/covariance.hpp"
#include "doa/types.hpp"

namespace doa {

/// Eigenpairs of the (whitened) covariance split by eigenvalue modulus.
struct SubspaceDecomposition {
  CVector eigenvalues;     // sorted by |lambda| descending
  CMatrix signal;          // V_S, M x N
  CMatrix noise;           // V_N, M x (M - N)
  CMatrix whitened_noise;  // N_v^{-1} V_N
};

/// General complex eigendecomposition of R' (not Hermitian once alpha > 0).
/// Requires 1 <= n_sources <= M - 1.
SubspaceDecomposition Decompose(const WhitenedCovariance& r_prime, const RMatrix& n_v,
                                int n_sources);

struct Pseudospectrum {
  std::vector<Angle> grid;
  std::vector<double> power;
  double resolution_deg = 1.0;

  /// 10*log10(power / max(power)), so the peak sits at 0 dB.
  std::vector<double> NormalizedDecibels() const;
};

/// Uniform grid over [-90, 90] with the given step; -90 and every multiple of
/// the step after it, up to and including +90 when it lands on the grid.
std::vector<Angle> ScanGrid(double resolution_deg);

inline constexpr double kSpectrumFloor = 1e-12;

/// P(a) = 1 / ||V_N'^H a||^2, denominator floored at kSpectrumFloor.
Pseudospectrum ComputePseudospectrum(const ArrayConfig& config,
                                     const SubspaceDecomposition& decomposition,
                                     double resolution_deg);

struct PeakSearchResult {
  std::vector<Angle> angles;  // ascending
  bool no_peaks = false;
};

/// The n_sources largest strict local maxima, ties resolved toward the lower
/// angle, returned in ascending angle order.
PeakSearchResult FindPeaks(const Pseudospectrum& spectrum, int n_sources);

struct MusicOptions {
  int n_sources = 1;
  double alpha = 0.0;  // 0 is conventional MUSIC
  double resolution_deg = 1.0;
};

struct MusicResult {
  Pseudospectrum spectrum;
  PeakSearchResult peaks;
};

/// sample covariance -> whiten -> decompose -> pseudospectrum -> peaks.
MusicResult RunMusic(const SnapshotMatrix& snapshots, const MusicOptions& options);

std::vector<Angle> MusicEstimate(const SnapshotMatrix& snapshots, const MusicOptions& options);

}  // namespace doa

#endif  // DOA_MUSIC_HPP
