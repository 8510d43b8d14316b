// Command-line entry point: twochan <mode> --config <path> [--output-dir <path>] [--quiet]

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "twochan/config.hpp"
#include "twochan/run.hpp"

int main(int argc, char **argv) {
  CLI::App app{"Two-channel delta-coupled wavepacket scattering"};
  app.set_version_flag("--version", TWOCHAN_VERSION);

  std::string mode;
  std::string config;
  std::string output_dir;
  bool quiet = false;
  app.add_option("mode", mode,
                 "stationary | propagate | oracle | series | compare")
      ->required();
  app.add_option("--config", config, "JSON experiment configuration")
      ->required();
  app.add_option("--output-dir", output_dir,
                 "Output directory (overrides output_dir in the config)");
  app.add_flag("--quiet", quiet, "Suppress progress messages");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : twochan::exit_config;
  }

  const auto parsed = twochan::parse_mode(mode);
  if (!parsed) {
    std::cerr << "unknown mode '" << mode << "'\n";
    return twochan::exit_config;
  }

  twochan::RunOptions opts;
  opts.quiet = quiet;
  if (!output_dir.empty())
    opts.output_dir = output_dir;
  opts.mode = *parsed;
  return twochan::run(config, opts);
}
