#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"

namespace {

constexpr const char* kFooter = R"(Exit codes:
  0  success
  1  internal error
  2  configuration error (including invalid model parameters)
  3  trajectory reached the chamber boundary
  4  rank computation unstable (no spectral gap)
  5  bracket audit residual above tolerance
  6  period verification failed
Environment:
  ISOCM_WORKERS  number of worker threads for independent trials (default 1))";

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Isochronous reduced spin models: simulation, period checks, invariant rank, bracket audit"};
  app.footer(kFooter);
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;

  const char* names[] = {"simulate", "verify-period", "rank", "bracket-audit", "validate"};
  const char* help[] = {"integrate and project the exact flow; write CSV trajectories",
                        "check return at T and non-return at T/2 over seeded trials",
                        "numerical rank of balanced trace-word invariants with pool saturation",
                        "residuals of the LieA reduced bracket and r-matrix identities",
                        "validate model parameters and configuration"};
  for (int i = 0; i < 5; ++i) {
    CLI::App* sub = app.add_subcommand(names[i], help[i]);
    sub->add_option("--config", config_path, "JSON configuration file")->required();
    sub->add_option("--out", out_dir, "output directory")->capture_default_str();
    sub->add_option("--seed", seed, "override the configuration seed");
  }
  CLI11_PARSE(app, argc, argv);
  const std::string command = app.get_subcommands().front()->get_name();

  nlohmann::json doc;
  {
    std::ifstream in(config_path);
    if (!in) {
      const isocm::Error e(isocm::ErrorKind::InvalidConfig, "cannot read config file '" + config_path + "'");
      auto d = isocm::cli::diagnostics(e, isocm::cli::kExitConfig);
      d["command"] = command;
      std::cout << d.dump(2) << "\n";
      return isocm::cli::kExitConfig;
    }
    try {
      doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& ex) {
      const isocm::Error e(isocm::ErrorKind::InvalidConfig, std::string("config is not valid JSON: ") + ex.what());
      auto d = isocm::cli::diagnostics(e, isocm::cli::kExitConfig);
      d["command"] = command;
      std::cout << d.dump(2) << "\n";
      return isocm::cli::kExitConfig;
    }
  }

  const auto res = isocm::cli::run_command(command, doc, out_dir, seed, isocm::cli::workers_from_env());
  std::cout << res.report.dump(2) << "\n";
  return res.exit_code;
}
