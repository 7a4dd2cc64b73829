#include "doa/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <string>
#include <thread>

#include "doa/errors.hpp"
#include "doa/music.hpp"

namespace doa {

EvalReport MatchEstimates(std::span<const Angle> truth, std::span<const Angle> estimates) {
  EvalReport report;
  std::vector<Angle> t(truth.begin(), truth.end());
  std::vector<Angle> e(estimates.begin(), estimates.end());
  std::sort(t.begin(), t.end());
  std::sort(e.begin(), e.end());

  if (t.size() == e.size()) {
    for (std::size_t i = 0; i < t.size(); ++i) report.matched.emplace_back(t[i], e[i]);
  } else {
    std::vector<bool> t_used(t.size(), false);
    std::vector<bool> e_used(e.size(), false);
    const std::size_t pairs = std::min(t.size(), e.size());
    for (std::size_t p = 0; p < pairs; ++p) {
      double best = std::numeric_limits<double>::infinity();
      std::size_t bi = 0;
      std::size_t bj = 0;
      for (std::size_t i = 0; i < t.size(); ++i) {
        if (t_used[i]) continue;
        for (std::size_t j = 0; j < e.size(); ++j) {
          if (e_used[j]) continue;
          const double d = std::abs(t[i].degrees() - e[j].degrees());
          if (d < best) {
            best = d;
            bi = i;
            bj = j;
          }
        }
      }
      t_used[bi] = true;
      e_used[bj] = true;
      report.matched.emplace_back(t[bi], e[bj]);
    }
    std::sort(report.matched.begin(), report.matched.end());
    report.misses = static_cast<int>(t.size() - pairs);
    report.false_detections = static_cast<int>(e.size() - pairs);
  }
  if (!report.matched.empty()) report.rmse_deg = Rmse(report);
  return report;
}

double Rmse(const EvalReport& report) {
  if (report.matched.empty()) throw InvalidArgument("nothing matched");
  double sum = 0.0;
  for (const auto& [truth, estimate] : report.matched) {
    const double d = truth.degrees() - estimate.degrees();
    sum += d * d;
  }
  return std::sqrt(sum / static_cast<double>(report.matched.size()));
}

double Rmse(std::span<const Angle> truth, std::span<const Angle> estimates) {
  return Rmse(MatchEstimates(truth, estimates));
}

std::string_view MethodName(Method method) {
  switch (method) {
    case Method::kMusic: return "music";
    case Method::kExtendedMusic: return "extended-music";
    case Method::kAf: return "af";
    case Method::kAfSingle: return "af-single";
  }
  return "unknown";
}

Method ParseMethod(std::string_view name) {
  for (Method m : {Method::kMusic, Method::kExtendedMusic, Method::kAf, Method::kAfSingle}) {
    if (MethodName(m) == name) return m;
  }
  throw InvalidArgument("unknown method '" + std::string(name) + "'");
}

std::vector<Angle> RunEstimator(const SnapshotMatrix& snapshots, const EstimatorSettings& settings) {
  switch (settings.method) {
    case Method::kMusic:
    case Method::kExtendedMusic: {
      MusicOptions options;
      options.n_sources = settings.n_sources;
      options.alpha = settings.method == Method::kMusic ? 0.0 : settings.alpha;
      options.resolution_deg = settings.resolution_deg;
      return MusicEstimate(snapshots, options);
    }
    case Method::kAf: {
      AfSettings af = settings.af;
      if (settings.af_known_order) af.model_order = settings.n_sources;
      return AfEstimate(snapshots, af).angles;
    }
    case Method::kAfSingle:
      return AfEstimateSingle(snapshots, settings.n_sources, 0, settings.af).angles;
  }
  throw InvalidArgument("unknown method");
}

std::uint64_t TrialSeed(std::uint64_t master_seed, std::size_t snr_index, std::size_t trial) {
  std::uint64_t h = MixSeed(master_seed);
  h = MixSeed(h ^ (static_cast<std::uint64_t>(snr_index) + 0x1000003ULL));
  return MixSeed(h ^ (static_cast<std::uint64_t>(trial) * 0x9e3779b97f4a7c15ULL));
}

SweepResult MonteCarlo(const SweepSpec& spec) {
  spec.array.Validate();
  spec.scenario.Validate();
  if (spec.trials < 1) throw InvalidArgument("trials must be >= 1");
  if (spec.snr_db.empty()) throw InvalidArgument("sweep needs at least one SNR value");
  if (spec.methods.empty()) throw InvalidArgument("sweep needs at least one method");

  std::vector<EstimatorSettings> methods = spec.methods;
  for (EstimatorSettings& m : methods) {
    if (m.n_sources == 0) m.n_sources = static_cast<int>(spec.scenario.angles.size());
  }

  const std::size_t n_snr = spec.snr_db.size();
  const std::size_t n_method = methods.size();
  const auto n_trial = static_cast<std::size_t>(spec.trials);
  struct Outcome {
    double rmse = std::numeric_limits<double>::quiet_NaN();
    int misses = 0;
  };
  // outcomes[(snr * trials + trial) * methods + method]
  std::vector<Outcome> outcomes(n_snr * n_trial * n_method);

  auto run_task = [&](std::size_t task) {
    const std::size_t s = task / n_trial;
    const std::size_t t = task % n_trial;
    Scenario scenario = spec.scenario;
    scenario.snr_db = spec.snr_db[s];
    scenario.seed = TrialSeed(spec.master_seed, s, t);
    const SnapshotMatrix x = SynthSnapshots(spec.array, scenario);
    for (std::size_t k = 0; k < n_method; ++k) {
      Outcome& out = outcomes[task * n_method + k];
      try {
        const EvalReport report = MatchEstimates(scenario.angles, RunEstimator(x, methods[k]));
        out.misses = report.misses;
        if (report.rmse_deg) out.rmse = *report.rmse_deg;
      } catch (const std::exception&) {
        out.misses = static_cast<int>(scenario.angles.size());
      }
    }
  };

  const std::size_t n_task = n_snr * n_trial;
  unsigned threads = spec.threads > 0 ? static_cast<unsigned>(spec.threads) : std::thread::hardware_concurrency();
  threads = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(n_task)));
  std::atomic<std::size_t> next{0};
  {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < threads; ++i) {
      pool.emplace_back([&] {
        for (std::size_t task = next++; task < n_task; task = next++) run_task(task);
      });
    }
  }

  SweepResult result;
  for (std::size_t s = 0; s < n_snr; ++s) {
    for (std::size_t k = 0; k < n_method; ++k) {
      SweepRow row;
      row.snr_db = spec.snr_db[s];
      row.method = methods[k].method;
      row.trials = spec.trials;
      double sum = 0.0;
      int ok = 0;
      for (std::size_t t = 0; t < n_trial; ++t) {
        const Outcome& o = outcomes[(s * n_trial + t) * n_method + k];
        row.total_misses += o.misses;
        if (std::isnan(o.rmse)) {
          ++row.failed_trials;
        } else {
          sum += o.rmse;
          ++ok;
        }
      }
      row.mean_rmse_deg = ok > 0 ? sum / ok : std::numeric_limits<double>::quiet_NaN();
      result.rows.push_back(row);
    }
  }
  std::stable_sort(result.rows.begin(), result.rows.end(), [](const SweepRow& a, const SweepRow& b) {
    if (a.snr_db != b.snr_db) return a.snr_db < b.snr_db;
    return MethodName(a.method) < MethodName(b.method);
  });
  return result;
}

}  // namespace doa
