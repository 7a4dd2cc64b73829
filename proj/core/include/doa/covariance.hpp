#ifndef DOA_COVARIANCE_HPP
#define DOA_COVARIANCE_HPP

#include "doa/signal_synth.hpp"
#include "doa/types.hpp"

namespace doa {

struct CovarianceEstimate {
  CMatrix r;  // (1/K) X X^H, Hermitian-symmetrized
  int frames_used = 0;
};

struct WhitenedCovariance {
  CMatrix r_prime;  // R * N_v^{-1}
};

CovarianceEstimate SampleCovariance(const SnapshotMatrix& snapshots);
CovarianceEstimate SampleCovariance(const CMatrix& snapshots);

/// R * N_v^{-1} through a Cholesky solve. Returns R unchanged when N_v is the
/// identity. Throws NumericError("singular noise correlation") when N_v has
/// condition number >= 1e12.
WhitenedCovariance Whiten(const CovarianceEstimate& covariance, const RMatrix& n_v);
WhitenedCovariance Whiten(const CovarianceEstimate& covariance, const NoiseModel& noise);

}  // namespace doa

#endif  // DOA_COVARIANCE_HPP
