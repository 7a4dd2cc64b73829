#ifndef DOA_EVALUATION_HPP
#define DOA_EVALUATION_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "doa/annihilating_filter.hpp"
#include "doa/array_model.hpp"
#include "doa/signal_synth.hpp"

namespace doa {

struct EvalReport {
  std::vector<std::pair<Angle, Angle>> matched;  // (truth, estimate)
  std::optional<double> rmse_deg;                // empty when nothing matched
  int misses = 0;
  int false_detections = 0;
};

/// Equal counts: both lists sorted and paired by index. Otherwise the closest
/// (truth, estimate) pair is matched first, repeatedly, until one side is
/// exhausted. Leftover truths are misses, leftover estimates false detections.
EvalReport MatchEstimates(std::span<const Angle> truth, std::span<const Angle> estimates);

/// sqrt(mean squared difference) over matched pairs, in degrees. Throws
/// InvalidArgument("nothing matched") when there are no pairs.
double Rmse(const EvalReport& report);

/// Convenience: MatchEstimates followed by Rmse.
double Rmse(std::span<const Angle> truth, std::span<const Angle> estimates);

enum class Method { kMusic, kExtendedMusic, kAf, kAfSingle };

std::string_view MethodName(Method method);
/// Throws InvalidArgument on unknown names.
Method ParseMethod(std::string_view name);

/// Everything an estimator needs besides the data.
struct EstimatorSettings {
  Method method = Method::kAf;
  int n_sources = 0;            // MUSIC and single-snapshot AF; 0 means "use the truth count"
  double alpha = 0.0;           // assumed noise ratio for extended MUSIC
  double resolution_deg = 1.0;  // MUSIC grid
  AfSettings af;
  // Multi-snapshot AF only: report the n_sources roots closest to the unit
  // circle rather than every root passing the beta test.
  bool af_known_order = false;
};

/// Runs one estimator on one data set, angles ascending.
std::vector<Angle> RunEstimator(const SnapshotMatrix& snapshots, const EstimatorSettings& settings);

struct SweepRow {
  double snr_db = 0.0;
  Method method = Method::kAf;
  double mean_rmse_deg = 0.0;  // NaN when every trial failed
  int trials = 0;
  int failed_trials = 0;  // estimator threw or produced no matched pair
  long total_misses = 0;
};

struct SweepResult {
  std::vector<SweepRow> rows;  // sorted by (snr, method)
};

struct SweepSpec {
  ArrayConfig array;
  Scenario scenario;  // snr_db and seed are overridden per trial
  std::vector<double> snr_db;
  std::vector<EstimatorSettings> methods;
  int trials = 100;
  std::uint64_t master_seed = 1;
  int threads = 0;  // 0 picks hardware concurrency
};

/// Seed of trial `trial` at SNR grid index `snr_index`. Depends only on the
/// triple, so every method sees the same data for a given trial.
std::uint64_t TrialSeed(std::uint64_t master_seed, std::size_t snr_index, std::size_t trial);

/// Monte-Carlo sweep. Deterministic in master_seed regardless of thread count.
SweepResult MonteCarlo(const SweepSpec& spec);

}  // namespace doa

#endif  // DOA_EVALUATION_HPP
