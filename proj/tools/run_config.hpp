#ifndef DOA_TOOLS_RUN_CONFIG_HPP
#define DOA_TOOLS_RUN_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "doa/annihilating_filter.hpp"
#include "doa/array_model.hpp"
#include "doa/evaluation.hpp"
#include "doa/signal_synth.hpp"

namespace doa::tools {

// Raised for anything wrong with the configuration file; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct MethodSection {
  Method method = Method::kAf;
  EstimatorSettings settings;
  SingleSnapshotSystem single_system = SingleSnapshotSystem::kAllRows;
};

struct SweepSection {
  std::vector<double> snr_db;
  std::vector<Method> methods;
  int trials = 100;
  int threads = 0;
};

// Parsed and validated run configuration. Example:
//
//   {
//     "array":    {"sensors": 11, "spacing_wavelengths": 0.5},
//     "scenario": {"angles": [-24, -12, 0, 12, 24], "snapshots": 100,
//                  "snr_db": 40, "alpha": 0, "seed": 1},
//     "method":   {"name": "af", "beta": 0.02},
//     "sweep":    {"snr_db": [10, 20, 30], "trials": 100, "methods": ["music", "af"]}
//   }
struct RunConfig {
  ArrayConfig array;
  Scenario scenario;
  std::optional<MethodSection> method;
  std::optional<SweepSection> sweep;
};

RunConfig ParseRunConfig(const std::string& json_text);
RunConfig LoadRunConfig(const std::filesystem::path& path);

}  // namespace doa::tools

#endif  // DOA_TOOLS_RUN_CONFIG_HPP
