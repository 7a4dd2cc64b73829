#ifndef DOA_TOOLS_COMMANDS_HPP
#define DOA_TOOLS_COMMANDS_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "run_config.hpp"

namespace doa::tools {

enum ExitCode : int { kOk = 0, kConfigError = 2, kNumericError = 3 };

struct CommonOptions {
  std::filesystem::path config;
  std::optional<std::uint64_t> seed;  // overrides scenario.seed
};

struct SpectrumOptions : CommonOptions {
  std::filesystem::path out;
  std::optional<std::filesystem::path> af_out;  // validated AF roots as angle_deg,residual
};

struct EstimateOptions : CommonOptions {
  bool json = false;
};

struct SweepOptions : CommonOptions {
  std::filesystem::path out;
};

// Each command writes results to `out` (or files), diagnostics to `err`, and
// returns the process exit code. Output files are written to a sibling
// temporary and renamed into place, so a failed run leaves nothing behind.
int CmdSpectrum(const SpectrumOptions& options, std::ostream& err);
int CmdEstimate(const EstimateOptions& options, std::ostream& out, std::ostream& err);
int CmdSweep(const SweepOptions& options, std::ostream& err);

// Same commands on an already-parsed configuration.
std::string SpectrumCsv(const RunConfig& config);
std::string AfRootsCsv(const RunConfig& config);
std::string EstimateReport(const RunConfig& config, bool json);
std::string SweepCsv(const RunConfig& config);

// Writes `contents` to `path` atomically (temp file + rename).
void WriteFileAtomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace doa::tools

#endif  // DOA_TOOLS_COMMANDS_HPP
