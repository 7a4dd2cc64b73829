#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <system_error>
#include <unistd.h>

#include <nlohmann/json.hpp>

#include "doa/errors.hpp"
#include "doa/music.hpp"

namespace doa::tools {
namespace {

std::string Format(const char* fmt, double value) {
  if (std::isnan(value)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, value);
  // Avoid "-0.0000" in printed output.
  std::string s(buf);
  if (s.starts_with("-") && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

SnapshotMatrix Synthesize(const RunConfig& config) { return SynthSnapshots(config.array, config.scenario); }

const MethodSection& RequireMethod(const RunConfig& config) {
  if (!config.method) throw ConfigError("missing key 'method'");
  return *config.method;
}

struct Estimate {
  std::vector<Angle> angles;
  std::vector<double> residuals;  // AF only, aligned with angles
};

Estimate RunMethod(const RunConfig& config, const SnapshotMatrix& x) {
  const MethodSection& m = RequireMethod(config);
  Estimate out;
  if (m.method == Method::kAf || m.method == Method::kAfSingle) {
    AfSettings af = m.settings.af;
    AfSolution solution;
    if (m.method == Method::kAf) {
      if (m.settings.af_known_order) af.model_order = m.settings.n_sources;
      solution = AfEstimate(x, af);
    } else {
      solution = AfEstimateSingle(x, m.settings.n_sources, 0, af, m.single_system);
    }
    std::vector<std::pair<Angle, double>> pairs;
    for (std::size_t i = 0; i < solution.roots.size(); ++i) {
      if (solution.accepted[i]) pairs.emplace_back(RootToAngle(x.config, solution.roots[i]), solution.residuals[i]);
    }
    std::sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [angle, residual] : pairs) {
      out.angles.push_back(angle);
      out.residuals.push_back(residual);
    }
    return out;
  }
  out.angles = RunEstimator(x, m.settings);
  return out;
}

EstimatorSettings SweepSettings(const RunConfig& config, Method method) {
  EstimatorSettings es;
  if (config.method) es = config.method->settings;
  es.method = method;
  if (!config.method) {
    es.n_sources = static_cast<int>(config.scenario.angles.size());
    es.alpha = config.scenario.alpha;
  } else if (method == Method::kExtendedMusic && config.method->method != Method::kExtendedMusic) {
    es.alpha = config.scenario.alpha;
  }
  return es;
}

template <typename Fn>
int Guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kNumericError;
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << '\n';
    return kNumericError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "output error: " << e.what() << '\n';
    return kConfigError;
  }
}

RunConfig Load(const CommonOptions& options) {
  RunConfig config = LoadRunConfig(options.config);
  if (options.seed) config.scenario.seed = *options.seed;
  return config;
}

}  // namespace

void WriteFileAtomic(const std::filesystem::path& path, const std::string& contents) {
  namespace fs = std::filesystem;
  const fs::path tmp = path.string() + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw ConfigError("cannot write '" + path.string() + "'");
    f << contents;
    f.flush();
    if (!f) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw ConfigError("cannot write '" + path.string() + "'");
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw ConfigError("cannot write '" + path.string() + "'");
  }
}

std::string SpectrumCsv(const RunConfig& config) {
  const MethodSection& m = RequireMethod(config);
  if (m.method != Method::kMusic && m.method != Method::kExtendedMusic) {
    throw ConfigError("spectrum needs method 'music' or 'extended-music'");
  }
  MusicOptions options;
  options.n_sources = m.settings.n_sources;
  options.alpha = m.method == Method::kMusic ? 0.0 : m.settings.alpha;
  options.resolution_deg = m.settings.resolution_deg;
  const MusicResult result = RunMusic(Synthesize(config), options);
  const std::vector<double> db = result.spectrum.NormalizedDecibels();
  std::string csv = "angle_deg,power_db\n";
  for (std::size_t i = 0; i < db.size(); ++i) {
    csv += Format("%.4f", result.spectrum.grid[i].degrees()) + "," + Format("%.6f", db[i]) + "\n";
  }
  return csv;
}

std::string AfRootsCsv(const RunConfig& config) {
  const MethodSection& m = RequireMethod(config);
  const SnapshotMatrix x = Synthesize(config);
  const AfSolution solution = AfEstimate(x, m.settings.af);
  std::vector<std::pair<Angle, double>> rows;
  for (std::size_t i = 0; i < solution.roots.size(); ++i) {
    if (solution.accepted[i]) rows.emplace_back(RootToAngle(x.config, solution.roots[i]), solution.residuals[i]);
  }
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::string csv = "angle_deg,residual\n";
  for (const auto& [angle, residual] : rows) {
    csv += Format("%.4f", angle.degrees()) + "," + Format("%.6g", residual) + "\n";
  }
  return csv;
}

std::string EstimateReport(const RunConfig& config, bool json) {
  const MethodSection& m = RequireMethod(config);
  const Estimate estimate = RunMethod(config, Synthesize(config));
  const EvalReport report = MatchEstimates(config.scenario.angles, estimate.angles);
  const std::string method(MethodName(m.method));

  if (json) {
    nlohmann::ordered_json j;
    j["method"] = method;
    j["estimates_deg"] = ToDegrees(estimate.angles);
    j["truth_deg"] = ToDegrees(config.scenario.angles);
    if (report.rmse_deg) {
      j["rmse_deg"] = *report.rmse_deg;
    } else {
      j["rmse_deg"] = nullptr;
    }
    j["matched"] = report.matched.size();
    j["misses"] = report.misses;
    j["false_detections"] = report.false_detections;
    if (!estimate.residuals.empty()) j["residuals"] = estimate.residuals;
    return j.dump(2) + "\n";
  }

  std::string text = "method: " + method + "\nestimates_deg:";
  for (const Angle& a : estimate.angles) text += " " + Format("%.4f", a.degrees());
  text += "\ntruth_deg:";
  for (const Angle& a : config.scenario.angles) text += " " + Format("%.4f", a.degrees());
  text += "\nrmse_deg: " + (report.rmse_deg ? Format("%.4f", *report.rmse_deg) : std::string("n/a"));
  text += "\nmatched: " + std::to_string(report.matched.size()) + "  misses: " + std::to_string(report.misses) +
          "  false_detections: " + std::to_string(report.false_detections) + "\n";
  return text;
}

std::string SweepCsv(const RunConfig& config) {
  if (!config.sweep) throw ConfigError("missing key 'sweep'");
  SweepSpec spec;
  spec.array = config.array;
  spec.scenario = config.scenario;
  spec.snr_db = config.sweep->snr_db;
  spec.trials = config.sweep->trials;
  spec.threads = config.sweep->threads;
  spec.master_seed = config.scenario.seed;
  for (Method method : config.sweep->methods) spec.methods.push_back(SweepSettings(config, method));
  const SweepResult result = MonteCarlo(spec);
  std::string csv = "snr_db,method,mean_rmse_deg,trials\n";
  for (const SweepRow& row : result.rows) {
    csv += Format("%g", row.snr_db) + "," + std::string(MethodName(row.method)) + "," +
           Format("%.6f", row.mean_rmse_deg) + "," + std::to_string(row.trials) + "\n";
  }
  return csv;
}

int CmdSpectrum(const SpectrumOptions& options, std::ostream& err) {
  return Guarded(err, [&] {
    const RunConfig config = Load(options);
    const std::string csv = SpectrumCsv(config);
    std::string af_csv;
    if (options.af_out) af_csv = AfRootsCsv(config);
    WriteFileAtomic(options.out, csv);
    if (options.af_out) WriteFileAtomic(*options.af_out, af_csv);
    return static_cast<int>(kOk);
  });
}

int CmdEstimate(const EstimateOptions& options, std::ostream& out, std::ostream& err) {
  return Guarded(err, [&] {
    const RunConfig config = Load(options);
    out << EstimateReport(config, options.json);
    return static_cast<int>(kOk);
  });
}

int CmdSweep(const SweepOptions& options, std::ostream& err) {
  return Guarded(err, [&] {
    const RunConfig config = Load(options);
    WriteFileAtomic(options.out, SweepCsv(config));
    return static_cast<int>(kOk);
  });
}

}  // namespace doa::tools
