#include <cstring>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "chwave/error.hpp"
#include "chwave/version.hpp"
#include "commands.hpp"

using namespace chwave;

namespace {

// --config has to be read before the other options are bound, so that the
// flags given on the command line override the file.
std::string find_config_path(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--config") == 0 && i + 1 < argc) return argv[i + 1];
    if (std::strncmp(argv[i], "--config=", 9) == 0) return argv[i] + 9;
  }
  return {};
}

void add_params(CLI::App* app, RunConfig& c) {
  app->add_option("--mean", c.params.mean_psi, "mean concentration <psi>");
  app->add_option("--f0", c.params.f0, "forcing amplitude")->check(CLI::NonNegativeNumber);
  app->add_option("--v", c.params.v, "wave speed");
  app->add_option("--d", c.params.d_mob, "mobility D")->check(CLI::PositiveNumber);
}

void add_newton(CLI::App* app, RunConfig& c) {
  app->add_option("--tol", c.newton.tol_residual, "stop when F.F/2 drops below this")->check(CLI::PositiveNumber);
  app->add_option("--max-iter", c.newton.max_outer, "outer Newton iterations")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  const std::string config_path = find_config_path(argc, argv);
  try {
    if (!config_path.empty()) cfg = load_run_config(config_path);
  } catch (const std::exception& e) {
    std::cerr << "chwave: " << e.what() << '\n';
    return cli::kUsage;
  }

  CLI::App app{"Travelling waves of the forced Cahn-Hilliard equation"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  std::string config_unused;
  std::string format = to_string(cfg.format);
  std::string init_csv;
  app.add_option("--config", config_unused, "JSON run configuration; flags override it")->check(CLI::ExistingFile);
  app.add_option("--out", cfg.output_dir, "output directory");
  app.add_option("--format", format, "csv, json or both")->check(CLI::IsMember({"csv", "json", "both"}));

  auto* reduced = app.add_subcommand("solve-reduced", "reduced (eps = 0) travelling wave");
  add_params(reduced, cfg);
  reduced->add_option("--n", cfg.n, "grid points")->check(CLI::Range(8, 1 << 20));
  reduced->add_option("--method", cfg.method, "shoot or newton")->check(CLI::IsMember({"shoot", "newton"}));
  reduced->add_option("--rk-tol", cfg.shooting.rk_tol, "integrator tolerance")->check(CLI::PositiveNumber);
  add_newton(reduced, cfg);

  auto* full = app.add_subcommand("solve-full", "full-model travelling wave by Newton");
  add_params(full, cfg);
  full->add_option("--eps", cfg.params.eps, "interface parameter eps")->check(CLI::NonNegativeNumber);
  full->add_option("--n", cfg.n, "grid points")->check(CLI::Range(8, 1 << 20));
  full->add_option("--guess", cfg.guess, "a2, a1, a3 or nspike:<n>");
  full->add_option("--init", init_csv, "start from an (eta, psi) CSV instead of a guess")->check(CLI::ExistingFile);
  full->add_option("--phase-trials", cfg.phase_trials, "spike placements to try")->check(CLI::PositiveNumber);
  full->add_flag("--stability", cfg.stability, "compute the spectrum of the converged wave");
  add_newton(full, cfg);

  auto* tens = app.add_subcommand("tens", "time evolution of the full PDE");
  add_params(tens, cfg);
  tens->add_option("--eps", cfg.params.eps, "interface parameter eps")->check(CLI::PositiveNumber);
  tens->add_option("--dt", cfg.tens.dt, "time step")->check(CLI::PositiveNumber);
  tens->add_option("--tfinal", cfg.tens.t_final, "final time")->check(CLI::PositiveNumber);
  tens->add_option("--nmodes", cfg.tens.n_modes, "Fourier modes")->check(CLI::Range(8, 1 << 20));
  tens->add_option("--seed", cfg.seed, "random initial condition seed");
  tens->add_option("--amplitude", cfg.tens.init_amplitude, "initial noise amplitude")->check(CLI::NonNegativeNumber);
  tens->add_option("--snap", cfg.tens.snapshot_interval, "space-time snapshot interval (0: none)")
      ->check(CLI::NonNegativeNumber);
  tens->add_option("--init", init_csv, "start from an (eta, psi) CSV")->check(CLI::ExistingFile);
  bool run_to_end = !cfg.tens.stop_when_steady;
  tens->add_flag("--no-early-stop", run_to_end, "integrate to --tfinal even after reaching steady state");

  auto* scan = app.add_subcommand("scan", "parameter-space maps");
  scan->add_option("--mode", cfg.scan_mode, "reduced or full")->check(CLI::IsMember({"reduced", "full"}));
  scan->add_option("--v", cfg.params.v, "wave speed");
  scan->add_option("--eps", cfg.params.eps, "interface parameter eps")->check(CLI::NonNegativeNumber);
  scan->add_option("--mean-min", cfg.grid.mean_min);
  scan->add_option("--mean-max", cfg.grid.mean_max);
  scan->add_option("--mean-step", cfg.grid.mean_step)->check(CLI::PositiveNumber);
  scan->add_option("--f0-min", cfg.grid.f0_min)->check(CLI::NonNegativeNumber);
  scan->add_option("--f0-max", cfg.grid.f0_max)->check(CLI::NonNegativeNumber);
  scan->add_option("--f0-step", cfg.grid.f0_step)->check(CLI::PositiveNumber);
  scan->add_option("--n", cfg.scan_n, "grid points per wave")->check(CLI::Range(8, 1 << 16));
  scan->add_option("--phase-trials", cfg.phase_trials, "spike placements to try")->check(CLI::PositiveNumber);
  scan->add_option("--tens-stride", cfg.tens_stride, "TENS cross-check on every k-th cell (0: off)")
      ->check(CLI::NonNegativeNumber);
  scan->add_option("--seed", cfg.seed, "TENS seed");
  scan->add_option("--jobs", cfg.jobs, "worker threads")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kUsage;
  }

  try {
    cfg.format = parse_output_format(format);
    cfg.tens.stop_when_steady = !run_to_end;
    if (*reduced) {
      cfg.command = "solve-reduced";
      cfg.params.validate();
      return cli::solve_reduced(cfg);
    }
    if (*full) {
      cfg.command = "solve-full";
      cfg.params.validate();
      return cli::solve_full(cfg, init_csv);
    }
    if (*tens) {
      cfg.command = "tens";
      cfg.params.validate();
      return cli::tens(cfg, init_csv);
    }
    cfg.command = "scan";
    cfg.grid.validate();
    return cli::scan(cfg);
  } catch (const std::invalid_argument& e) {
    std::cerr << "chwave: " << e.what() << '\n';
    return cli::kUsage;
  } catch (const std::exception& e) {
    std::cerr << "chwave: " << e.what() << '\n';
    return cli::kError;
  }
}
