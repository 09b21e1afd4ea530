#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iostream>

#include <nlohmann/json.hpp>

#include "chwave/error.hpp"
#include "chwave/version.hpp"

namespace chwave::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

bool want_csv(const RunConfig& c) { return c.format != OutputFormat::Json; }
bool want_json(const RunConfig& c) { return c.format != OutputFormat::Csv; }

json base_summary(const RunConfig& cfg) {
  return {{"version", kVersion}, {"config", json::parse(to_json(cfg))}};
}

void write_summary(const RunConfig& cfg, const std::string& name, const json& doc) {
  if (want_json(cfg)) write_text(fs::path(cfg.output_dir) / name, doc.dump(1));
}

void emit_profile(const RunConfig& cfg, const std::string& stem, const Profile& p, json& summary) {
  if (want_csv(cfg)) write_profile_csv(fs::path(cfg.output_dir) / (stem + ".csv"), p, config_header(cfg));
  if (!want_csv(cfg)) summary[stem] = p.vector();
}

void save_config(const RunConfig& cfg) { save_run_config(fs::path(cfg.output_dir) / "config.json", cfg); }

// Fraction of grid points that are local extrema. A smooth periodic profile
// has a handful; an odd-even zigzag (a discrete artefact) has nearly all.
double zigzag_fraction(std::span<const double> psi) {
  const std::size_t n = psi.size();
  std::size_t extrema = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double left = psi[i] - psi[(i + n - 1) % n];
    const double right = psi[(i + 1) % n] - psi[i];
    extrema += left * right < 0.0;
  }
  return static_cast<double>(extrema) / static_cast<double>(n);
}

double min_abs_s(std::span<const double> psi) {
  double m = INFINITY;
  for (double x : psi) m = std::min(m, std::abs(3.0 * x * x - 1.0));
  return m;
}

int newton_failure(const RunConfig& cfg, const SolverError& e, json summary) {
  std::cerr << "chwave: " << e.what() << '\n';
  summary["status"] = std::string(to_string(e.code()));
  summary["message"] = e.what();
  write_summary(cfg, cfg.command == "solve-reduced" ? "reduced_summary.json" : "wave_summary.json", summary);
  return kNoConvergence;
}

bool is_newton_failure(ErrorCode c) {
  return c == ErrorCode::NoConvergence || c == ErrorCode::LineSearchStalled || c == ErrorCode::JacobianSingular;
}

}  // namespace

int solve_reduced(const RunConfig& cfg) {
  save_config(cfg);
  const ProblemParams& p = cfg.params;
  json summary = base_summary(cfg);
  summary["method"] = cfg.method;

  if (cfg.method == "shoot") {
    ShootingConfig sc = cfg.shooting;
    sc.n_points = cfg.n;
    try {
      const ReducedSolution sol = solve_reduced(p, sc);
      summary["status"] = "ok";
      summary["branch"] = sol.branch.j;
      summary["shoot_root"] = sol.shoot_root;
      summary["shoot_residual"] = sol.shoot_residual;
      summary["regular"] = sol.regular;
      summary["near_singular"] = sol.near_singular;
      summary["min_abs_s"] = sol.min_abs_s;
      summary["residual_max"] = residual_reduced(sol.profile);
      emit_profile(cfg, "reduced_profile", sol.profile, summary);
      write_summary(cfg, "reduced_summary.json", summary);
      return kOk;
    } catch (const SolverError& e) {
      if (e.code() != ErrorCode::SingularOnly && e.code() != ErrorCode::NoPeriodicSolution) throw;
      std::cerr << "chwave: " << e.what() << '\n';
      summary["status"] = std::string(to_string(e.code()));
      summary["message"] = e.what();
      write_summary(cfg, "reduced_summary.json", summary);
      return kNotRegular;
    }
  }
  if (cfg.method != "newton") throw std::invalid_argument("unknown method '" + cfg.method + "'");

  try {
    const TravellingWave w =
        newton_linesearch(guess_a2(p, cfg.n), p, Model::Reduced, cfg.newton, GuessLabel{GuessKind::A2, 0, +1});
    summary["status"] = "ok";
    summary["iterations"] = w.iterations;
    summary["final_residual"] = w.final_residual;
    summary["max_residual"] = w.max_residual;
    summary["merit_history"] = w.merit_history;
    summary["min_abs_s"] = min_abs_s(w.profile.values());
    summary["zigzag_fraction"] = zigzag_fraction(w.profile.values());
    emit_profile(cfg, "reduced_profile", w.profile, summary);
    write_summary(cfg, "reduced_summary.json", summary);
    return kOk;
  } catch (const SolverError& e) {
    if (!is_newton_failure(e.code())) throw;
    return newton_failure(cfg, e, summary);
  }
}

int solve_full(const RunConfig& cfg, const std::string& init_csv) {
  save_config(cfg);
  const ProblemParams& p = cfg.params;
  json summary = base_summary(cfg);
  const GuessLabel label = init_csv.empty() ? parse_guess_label(cfg.guess) : GuessLabel{};
  summary["guess"] = init_csv.empty() ? to_string(label) : "file:" + init_csv;

  std::optional<TravellingWave> found;
  try {
    if (!init_csv.empty()) {
      const Profile start = read_profile_csv(init_csv, p);
      if (std::abs(start.mean() - p.mean_psi) > 1e-8) {
        throw std::invalid_argument("initial profile mean differs from --mean");
      }
      found = newton_linesearch(start.values(), p, Model::Full, cfg.newton);
    } else {
      found = solve_wave(p, cfg.n, label, Model::Full, cfg.newton, cfg.phase_trials);
    }
  } catch (const SolverError& e) {
    if (!is_newton_failure(e.code())) throw;
    return newton_failure(cfg, e, summary);
  }
  const TravellingWave& w = *found;
  summary["status"] = "ok";
  summary["iterations"] = w.iterations;
  summary["final_residual"] = w.final_residual;
  summary["max_residual"] = w.max_residual;
  summary["merit_history"] = w.merit_history;
  summary["step_lengths"] = w.step_lengths;
  summary["spikes"] = count_spikes(w.profile.values());
  emit_profile(cfg, "wave", w.profile, summary);

  if (cfg.stability) {
    const StabilityReport r = compute_spectrum(w.profile, p.eps);
    summary["max_re"] = r.max_re;
    summary["verdict"] = to_string(r.verdict);
    summary["case"] = to_string(r.bounds.case_label.kind);
    summary["stable_bound"] = r.bounds.stable_bound;
    summary["unstable_bound"] = r.bounds.unstable_bound;
    if (want_csv(cfg)) write_spectrum_csv(fs::path(cfg.output_dir) / "spectrum.csv", r, config_header(cfg));
    std::cerr << "chwave: max Re lambda = " << r.max_re << " (" << to_string(r.verdict) << ")\n";
  }
  write_summary(cfg, "wave_summary.json", summary);
  return kOk;
}

int tens(const RunConfig& cfg, const std::string& init_csv) {
  save_config(cfg);
  TensConfig tc = cfg.tens;
  tc.seed = cfg.seed;
  json summary = base_summary(cfg);
  std::optional<Profile> start;
  if (!init_csv.empty()) start = read_profile_csv(init_csv, cfg.params);

  std::optional<TensResult> done;
  try {
    done = run(cfg.params, tc, start);
  } catch (const SolverError& e) {
    if (e.code() != ErrorCode::BlowUp) throw;
    std::cerr << "chwave: " << e.what() << '\n';
    summary["status"] = "blow_up";
    summary["message"] = e.what();
    write_summary(cfg, "tens_summary.json", summary);
    return kNoConvergence;
  }
  const TensResult& r = *done;
  summary["status"] = r.steady ? "steady" : "not_steady";
  summary["steady"] = r.steady;
  summary["steady_time"] = r.steady_time;
  summary["time"] = r.time;
  summary["steps"] = r.steps;
  summary["mean_drift"] = r.mean_drift;
  summary["max_imag"] = r.max_imag;
  summary["seed"] = r.seed;
  summary["final_change_rate"] = r.history.empty() ? 0.0 : r.history.back().change_rate;
  emit_profile(cfg, "tens_final", r.final, summary);
  if (want_csv(cfg)) {
    const auto header = config_header(cfg);
    write_tens_history_csv(fs::path(cfg.output_dir) / "tens_history.csv", r, header);
    if (!r.snapshots.empty()) {
      write_spacetime_csv(fs::path(cfg.output_dir) / "tens_spacetime.csv", r, cfg.params, header);
    }
  }
  write_summary(cfg, "tens_summary.json", summary);
  std::cerr << "chwave: t = " << r.time << (r.steady ? ", steady" : ", not steady") << '\n';
  return r.steady ? kOk : kNotRegular;
}

int scan(const RunConfig& cfg) {
  save_config(cfg);
  const auto header = config_header(cfg);
  const fs::path out(cfg.output_dir);
  const auto t0 = std::chrono::steady_clock::now();

  if (cfg.scan_mode == "reduced") {
    ReducedScanConfig rc;
    rc.shooting = cfg.shooting;
    rc.shooting.n_points = cfg.scan_n;
    rc.jobs = cfg.jobs;
    const ReducedMap map = scan_reduced(cfg.grid, cfg.params.v, rc);
    if (want_csv(cfg)) write_reduced_map_csv(out / "reduced_map.csv", map, header);
    if (want_json(cfg)) write_text(out / "reduced_map.json", reduced_map_json(map, cfg));
    std::cerr << "chwave: " << map.cells.size() << " cells, " << map.wedge_violations() << " wedge violations\n";
  } else if (cfg.scan_mode == "full") {
    FullScanConfig fc;
    fc.n = cfg.scan_n;
    fc.newton = cfg.newton;
    fc.phase_trials = cfg.phase_trials;
    fc.tens_stride = cfg.tens_stride;
    fc.tens = cfg.tens;
    fc.tens.seed = cfg.seed;
    fc.jobs = cfg.jobs;
    const FlowMap map = scan_full(cfg.grid, cfg.params.v, cfg.params.eps, fc);
    if (want_csv(cfg)) {
      write_flow_map_csv(out / "flow_map.csv", map, header);
      write_neutral_curves_csv(out / "neutral_curves.csv", map, header);
    }
    if (want_json(cfg)) write_text(out / "flow_map.json", flow_map_json(map, cfg));
    std::size_t unresolved = 0;
    for (const auto& c : map.cells) unresolved += c.classification == CellClass::Unresolved;
    std::cerr << "chwave: " << map.cells.size() << " cells, " << unresolved << " unresolved\n";
  } else {
    throw std::invalid_argument("unknown scan mode '" + cfg.scan_mode + "'");
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::cerr << "chwave: scan took " << secs << " s\n";
  return kOk;
}

}  // namespace chwave::cli
