#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
  using namespace doa::tools;

  CLI::App app{"Direction-of-arrival estimation for uniform linear arrays: MUSIC, "
               "diffuse-noise MUSIC and annihilating-filter estimators"};
  app.require_subcommand(1);

  std::string config;
  std::string out;
  std::string af_out;
  std::optional<std::uint64_t> seed;
  bool json = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config, "JSON run configuration")->required()->check(CLI::ExistingFile);
    cmd->add_option("--seed", seed, "Override scenario.seed");
  };

  auto* spectrum = app.add_subcommand("spectrum", "Write the MUSIC pseudospectrum as CSV (angle_deg,power_db)");
  add_common(spectrum);
  spectrum->add_option("--out", out, "Output CSV path")->required();
  spectrum->add_option("--af-out", af_out, "Also write validated AF roots (angle_deg,residual)");

  auto* estimate = app.add_subcommand("estimate", "Print estimated angles and RMSE against the configured truth");
  add_common(estimate);
  estimate->add_flag("--json", json, "Machine-readable output");

  auto* sweep = app.add_subcommand("sweep", "Monte-Carlo RMSE sweep over SNR as CSV");
  add_common(sweep);
  sweep->add_option("--out", out, "Output CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  if (spectrum->parsed()) {
    SpectrumOptions options;
    options.config = config;
    options.seed = seed;
    options.out = out;
    if (!af_out.empty()) options.af_out = af_out;
    return CmdSpectrum(options, std::cerr);
  }
  if (estimate->parsed()) {
    EstimateOptions options;
    options.config = config;
    options.seed = seed;
    options.json = json;
    return CmdEstimate(options, std::cout, std::cerr);
  }
  SweepOptions options;
  options.config = config;
  options.seed = seed;
  options.out = out;
  return CmdSweep(options, std::cerr);
}
