#include "run_config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "doa/errors.hpp"

namespace doa::tools {
namespace {

using nlohmann::json;

void RejectUnknownKeys(const json& section, const std::string& name, const std::set<std::string>& allowed) {
  for (const auto& [key, value] : section.items()) {
    if (!allowed.contains(key)) throw ConfigError("unknown key '" + name + "." + key + "'");
  }
}

const json& RequireObject(const json& root, const std::string& key) {
  if (!root.contains(key)) throw ConfigError("missing key '" + key + "'");
  const json& section = root.at(key);
  if (!section.is_object()) throw ConfigError("'" + key + "' must be an object");
  return section;
}

template <typename T>
T Get(const json& section, const std::string& path, const std::string& key, T fallback) {
  if (!section.contains(key)) return fallback;
  try {
    return section.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("'" + path + "." + key + "' has the wrong type");
  }
}

template <typename T>
T Require(const json& section, const std::string& path, const std::string& key) {
  if (!section.contains(key)) throw ConfigError("missing key '" + path + "." + key + "'");
  return Get<T>(section, path, key, T{});
}

ArrayConfig ParseArray(const json& root) {
  if (!root.contains("array")) return ArrayConfig::FromWavelengths(11, 0.5);
  const json& a = RequireObject(root, "array");
  RejectUnknownKeys(a, "array", {"sensors", "spacing_wavelengths", "spacing_m", "wave_speed", "omega"});
  const int sensors = Get<int>(a, "array", "sensors", 11);
  const bool physical = a.contains("spacing_m") || a.contains("wave_speed") || a.contains("omega");
  if (physical && a.contains("spacing_wavelengths")) {
    throw ConfigError("give either 'array.spacing_wavelengths' or 'array.spacing_m/wave_speed/omega', not both");
  }
  if (!physical) return ArrayConfig::FromWavelengths(sensors, Get<double>(a, "array", "spacing_wavelengths", 0.5));
  ArrayConfig config;
  config.sensors = sensors;
  config.spacing_m = Require<double>(a, "array", "spacing_m");
  config.wave_speed = Require<double>(a, "array", "wave_speed");
  config.omega = Require<double>(a, "array", "omega");
  return config;
}

Scenario ParseScenario(const json& root) {
  const json& s = RequireObject(root, "scenario");
  RejectUnknownKeys(s, "scenario", {"angles", "snapshots", "snr_db", "alpha", "coherent", "seed", "noiseless"});
  Scenario scenario;
  scenario.angles = AnglesFromDegrees(Require<std::vector<double>>(s, "scenario", "angles"));
  scenario.snapshots = Get<int>(s, "scenario", "snapshots", 100);
  scenario.snr_db = Get<double>(s, "scenario", "snr_db", 40.0);
  scenario.alpha = Get<double>(s, "scenario", "alpha", 0.0);
  scenario.coherent = Get<bool>(s, "scenario", "coherent", false);
  scenario.seed = Get<std::uint64_t>(s, "scenario", "seed", 1);
  scenario.noiseless = Get<bool>(s, "scenario", "noiseless", false);
  return scenario;
}

MethodSection ParseMethod(const json& root, const Scenario& scenario) {
  const json& m = RequireObject(root, "method");
  RejectUnknownKeys(m, "method", {"name", "grid_deg", "beta", "sources", "alpha", "known_order", "single_system"});
  MethodSection out;
  out.method = doa::ParseMethod(Require<std::string>(m, "method", "name"));
  EstimatorSettings& es = out.settings;
  es.method = out.method;
  es.n_sources = Get<int>(m, "method", "sources", static_cast<int>(scenario.angles.size()));
  es.alpha = Get<double>(m, "method", "alpha", out.method == Method::kExtendedMusic ? scenario.alpha : 0.0);
  es.resolution_deg = Get<double>(m, "method", "grid_deg", 1.0);
  es.af.beta = Get<double>(m, "method", "beta", 0.02);
  es.af_known_order = Get<bool>(m, "method", "known_order", false);
  const auto system = Get<std::string>(m, "method", "single_system", "all-rows");
  if (system == "all-rows") {
    out.single_system = SingleSnapshotSystem::kAllRows;
  } else if (system == "square") {
    out.single_system = SingleSnapshotSystem::kSquare;
  } else {
    throw ConfigError("'method.single_system' must be \"all-rows\" or \"square\"");
  }
  return out;
}

SweepSection ParseSweep(const json& root) {
  const json& s = RequireObject(root, "sweep");
  RejectUnknownKeys(s, "sweep", {"snr_db", "trials", "methods", "threads"});
  SweepSection out;
  out.snr_db = Get<std::vector<double>>(s, "sweep", "snr_db", {0, 5, 10, 15, 20, 25, 30, 35, 40, 45, 50, 55, 60});
  out.trials = Get<int>(s, "sweep", "trials", 100);
  out.threads = Get<int>(s, "sweep", "threads", 0);
  for (const auto& name : Get<std::vector<std::string>>(s, "sweep", "methods", {"music", "af"})) {
    out.methods.push_back(doa::ParseMethod(name));
  }
  return out;
}

void ValidateAgainstModules(const RunConfig& config) {
  config.array.Validate();
  config.scenario.Validate();
  const int m = config.array.sensors;
  auto check_method = [&](Method method, const EstimatorSettings& es) {
    es.af.Validate();
    if (!(es.resolution_deg > 0.0)) throw InvalidArgument("grid resolution must be positive");
    if (!(es.alpha >= 0.0)) throw InvalidArgument("alpha must be >= 0");
    switch (method) {
      case Method::kMusic:
      case Method::kExtendedMusic:
        if (es.n_sources < 1 || es.n_sources > m - 1) throw InvalidArgument("MUSIC needs 1 <= sources <= M-1");
        break;
      case Method::kAfSingle:
        if (es.n_sources < 1 || 2 * es.n_sources > m) throw InvalidArgument("single-snapshot AF needs M >= 2 * sources");
        break;
      case Method::kAf:
        if (es.af_known_order && es.n_sources < 1) throw InvalidArgument("known_order needs sources >= 1");
        break;
    }
  };
  if (config.method) check_method(config.method->method, config.method->settings);
  if (config.sweep) {
    if (config.sweep->trials < 1) throw InvalidArgument("sweep.trials must be >= 1");
    if (config.sweep->snr_db.empty()) throw InvalidArgument("sweep.snr_db must not be empty");
    if (config.sweep->methods.empty()) throw InvalidArgument("sweep.methods must not be empty");
    for (Method method : config.sweep->methods) {
      EstimatorSettings es = config.method ? config.method->settings : EstimatorSettings{};
      es.method = method;
      if (!config.method) es.n_sources = static_cast<int>(config.scenario.angles.size());
      check_method(method, es);
    }
  }
}

}  // namespace

RunConfig ParseRunConfig(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config must be a JSON object");
  RejectUnknownKeys(root, "config", {"array", "scenario", "method", "sweep"});

  try {
    RunConfig config;
    config.array = ParseArray(root);
    config.scenario = ParseScenario(root);
    if (root.contains("method")) config.method = ParseMethod(root, config.scenario);
    if (root.contains("sweep")) config.sweep = ParseSweep(root);
    ValidateAgainstModules(config);
    return config;
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
}

RunConfig LoadRunConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return ParseRunConfig(text.str());
}

}  // namespace doa::tools
