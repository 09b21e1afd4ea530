#include "chwave/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "chwave/error.hpp"
#include "chwave/version.hpp"

namespace chwave {

using nlohmann::json;

namespace {

json params_json(const ProblemParams& p) {
  return {{"mean", p.mean_psi}, {"f0", p.f0},      {"v", p.v},          {"d", p.d_mob},
          {"k", p.k_wave},      {"l", p.l_period}, {"eps", p.eps}};
}

json grid_json(const ScanGrid& g) {
  return {{"mean_min", g.mean_min}, {"mean_max", g.mean_max}, {"mean_step", g.mean_step},
          {"f0_min", g.f0_min},     {"f0_max", g.f0_max},     {"f0_step", g.f0_step}};
}

json newton_json(const NewtonConfig& c) {
  return {{"tol_residual", c.tol_residual},
          {"max_outer", c.max_outer},
          {"c_armijo", c.c_armijo},
          {"rho_backtrack", c.rho_backtrack},
          {"min_alpha", c.min_alpha}};
}

json shooting_json(const ShootingConfig& c) {
  return {{"n_points", c.n_points},
          {"rk_tol", c.rk_tol},
          {"bracket_samples", c.bracket_samples},
          {"root_tol", c.root_tol},
          {"near_singular_tol", c.near_singular_tol}};
}

json tens_json(const TensConfig& c) {
  return {{"n_modes", c.n_modes},
          {"dt", c.dt},
          {"t_final", c.t_final},
          {"seed", c.seed},
          {"init_amplitude", c.init_amplitude},
          {"steady_tol", c.steady_tol},
          {"steady_window", c.steady_window},
          {"sample_interval", c.sample_interval},
          {"snapshot_interval", c.snapshot_interval},
          {"stop_when_steady", c.stop_when_steady}};
}

json config_json(const RunConfig& c) {
  return {{"command", c.command},
          {"params", params_json(c.params)},
          {"n", c.n},
          {"method", c.method},
          {"guess", c.guess},
          {"stability", c.stability},
          {"newton", newton_json(c.newton)},
          {"shooting", shooting_json(c.shooting)},
          {"tens", tens_json(c.tens)},
          {"scan_mode", c.scan_mode},
          {"grid", grid_json(c.grid)},
          {"scan_n", c.scan_n},
          {"phase_trials", c.phase_trials},
          {"tens_stride", c.tens_stride},
          {"jobs", c.jobs},
          {"output_dir", c.output_dir},
          {"format", to_string(c.format)},
          {"seed", c.seed}};
}

// Copies j[key] into `out` when present.
template <class T>
void take(const json& j, const char* key, T& out) {
  if (auto it = j.find(key); it != j.end()) out = it->get<T>();
}

void reject_unknown(const json& j, std::initializer_list<const char*> keys, const std::string& where) {
  if (!j.is_object()) throw std::invalid_argument("config: '" + where + "' must be an object");
  for (const auto& [k, _] : j.items()) {
    bool known = false;
    for (const char* key : keys) known = known || k == key;
    if (!known) throw std::invalid_argument("config: unknown key '" + k + "' in " + where);
  }
}

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path);
  if (!out) throw SolverError(ErrorCode::Io, "cannot open " + path.string() + " for writing");
  return out;
}

std::string csv_bool(bool b) { return b ? "1" : "0"; }

std::string opt_bool(const std::optional<bool>& b) { return b ? csv_bool(*b) : ""; }

}  // namespace

std::string to_string(OutputFormat f) {
  switch (f) {
    case OutputFormat::Csv: return "csv";
    case OutputFormat::Json: return "json";
    case OutputFormat::Both: return "both";
  }
  return "both";
}

OutputFormat parse_output_format(const std::string& text) {
  if (text == "csv") return OutputFormat::Csv;
  if (text == "json") return OutputFormat::Json;
  if (text == "both") return OutputFormat::Both;
  throw std::invalid_argument("unknown output format '" + text + "'");
}

std::string to_json(const RunConfig& cfg) { return config_json(cfg).dump(); }

RunConfig run_config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  RunConfig c;
  try {
    reject_unknown(j,
                   {"command", "params", "n", "method", "guess", "stability", "newton", "shooting", "tens",
                    "scan_mode", "grid", "scan_n", "phase_trials", "tens_stride", "jobs", "output_dir", "format",
                    "seed"},
                   "config");
    take(j, "command", c.command);
    if (auto it = j.find("params"); it != j.end()) {
      reject_unknown(*it, {"mean", "f0", "v", "d", "k", "l", "eps"}, "params");
      take(*it, "mean", c.params.mean_psi);
      take(*it, "f0", c.params.f0);
      take(*it, "v", c.params.v);
      take(*it, "d", c.params.d_mob);
      take(*it, "k", c.params.k_wave);
      take(*it, "l", c.params.l_period);
      take(*it, "eps", c.params.eps);
    }
    take(j, "n", c.n);
    take(j, "method", c.method);
    take(j, "guess", c.guess);
    take(j, "stability", c.stability);
    if (auto it = j.find("newton"); it != j.end()) {
      reject_unknown(*it, {"tol_residual", "max_outer", "c_armijo", "rho_backtrack", "min_alpha"}, "newton");
      take(*it, "tol_residual", c.newton.tol_residual);
      take(*it, "max_outer", c.newton.max_outer);
      take(*it, "c_armijo", c.newton.c_armijo);
      take(*it, "rho_backtrack", c.newton.rho_backtrack);
      take(*it, "min_alpha", c.newton.min_alpha);
    }
    if (auto it = j.find("shooting"); it != j.end()) {
      reject_unknown(*it, {"n_points", "rk_tol", "bracket_samples", "root_tol", "near_singular_tol"}, "shooting");
      take(*it, "n_points", c.shooting.n_points);
      take(*it, "rk_tol", c.shooting.rk_tol);
      take(*it, "bracket_samples", c.shooting.bracket_samples);
      take(*it, "root_tol", c.shooting.root_tol);
      take(*it, "near_singular_tol", c.shooting.near_singular_tol);
    }
    if (auto it = j.find("tens"); it != j.end()) {
      reject_unknown(*it,
                     {"n_modes", "dt", "t_final", "seed", "init_amplitude", "steady_tol", "steady_window",
                      "sample_interval", "snapshot_interval", "stop_when_steady"},
                     "tens");
      take(*it, "n_modes", c.tens.n_modes);
      take(*it, "dt", c.tens.dt);
      take(*it, "t_final", c.tens.t_final);
      take(*it, "seed", c.tens.seed);
      take(*it, "init_amplitude", c.tens.init_amplitude);
      take(*it, "steady_tol", c.tens.steady_tol);
      take(*it, "steady_window", c.tens.steady_window);
      take(*it, "sample_interval", c.tens.sample_interval);
      take(*it, "snapshot_interval", c.tens.snapshot_interval);
      take(*it, "stop_when_steady", c.tens.stop_when_steady);
    }
    take(j, "scan_mode", c.scan_mode);
    if (auto it = j.find("grid"); it != j.end()) {
      reject_unknown(*it, {"mean_min", "mean_max", "mean_step", "f0_min", "f0_max", "f0_step"}, "grid");
      take(*it, "mean_min", c.grid.mean_min);
      take(*it, "mean_max", c.grid.mean_max);
      take(*it, "mean_step", c.grid.mean_step);
      take(*it, "f0_min", c.grid.f0_min);
      take(*it, "f0_max", c.grid.f0_max);
      take(*it, "f0_step", c.grid.f0_step);
    }
    take(j, "scan_n", c.scan_n);
    take(j, "phase_trials", c.phase_trials);
    take(j, "tens_stride", c.tens_stride);
    take(j, "jobs", c.jobs);
    take(j, "output_dir", c.output_dir);
    if (auto it = j.find("format"); it != j.end()) c.format = parse_output_format(it->get<std::string>());
    take(j, "seed", c.seed);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SolverError(ErrorCode::Io, "cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return run_config_from_json(buf.str());
}

void save_run_config(const std::filesystem::path& path, const RunConfig& cfg) {
  write_text(path, config_json(cfg).dump(2));
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::vector<std::string> config_header(const RunConfig& cfg) {
  return {std::string("chwave ") + kVersion, "config " + to_json(cfg)};
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::string>& columns, const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out = open_out(path);
  for (const auto& line : header) out << "# " << line << '\n';
  for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
  out << '\n';
  for (const auto& row : rows) {
    if (row.size() != columns.size()) throw std::invalid_argument("write_csv: row width != column count");
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << '\n';
  }
  if (!out) throw SolverError(ErrorCode::Io, "write failed: " + path.string());
}

void write_profile_csv(const std::filesystem::path& path, const Profile& p, const std::vector<std::string>& header) {
  std::vector<std::vector<std::string>> rows;
  rows.reserve(static_cast<std::size_t>(p.size()));
  for (int i = 0; i < p.size(); ++i) rows.push_back({format_double(p.eta(i)), format_double(p[i])});
  write_csv(path, header, {"eta", "psi"}, rows);
}

Profile read_profile_csv(const std::filesystem::path& path, const ProblemParams& params) {
  std::ifstream in(path);
  if (!in) throw SolverError(ErrorCode::Io, "cannot read " + path.string());
  std::vector<double> psi;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto comma = line.find(',');
    const std::string field = comma == std::string::npos ? line : line.substr(comma + 1);
    try {
      std::size_t used = 0;
      const double x = std::stod(field, &used);
      psi.push_back(x);
    } catch (const std::exception&) {
      if (psi.empty()) continue;  // column-name row
      throw std::invalid_argument("read_profile_csv: bad value '" + field + "' in " + path.string());
    }
  }
  // The mean of a file profile defines the problem's <psi>.
  return Profile(params.with_mean(mean_of(psi)), std::move(psi));
}

void write_spectrum_csv(const std::filesystem::path& path, const StabilityReport& report,
                        const std::vector<std::string>& header) {
  std::vector<std::vector<std::string>> rows;
  rows.reserve(report.spectrum.size());
  for (std::size_t i = 0; i < report.spectrum.size(); ++i) {
    rows.push_back({std::to_string(i), format_double(report.spectrum[i].real()),
                    format_double(report.spectrum[i].imag())});
  }
  write_csv(path, header, {"index", "re", "im"}, rows);
}

void write_tens_history_csv(const std::filesystem::path& path, const TensResult& result,
                            const std::vector<std::string>& header) {
  std::vector<std::vector<std::string>> rows;
  rows.reserve(result.history.size());
  for (const auto& s : result.history) rows.push_back({format_double(s.time), format_double(s.change_rate)});
  write_csv(path, header, {"time", "change_rate"}, rows);
}

void write_spacetime_csv(const std::filesystem::path& path, const TensResult& result, const ProblemParams& params,
                         const std::vector<std::string>& header) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& snap : result.snapshots) {
    const std::vector<double> eta = make_grid(params, static_cast<int>(snap.values.size()));
    for (std::size_t i = 0; i < eta.size(); ++i) {
      rows.push_back({format_double(snap.time), format_double(eta[i]), format_double(snap.values[i])});
    }
  }
  write_csv(path, header, {"time", "eta", "psi"}, rows);
}

void write_reduced_map_csv(const std::filesystem::path& path, const ReducedMap& map,
                           const std::vector<std::string>& header) {
  std::vector<std::vector<std::string>> rows;
  rows.reserve(map.cells.size());
  for (const auto& c : map.cells) {
    rows.push_back({format_double(c.params.mean_psi), format_double(c.params.f0), format_double(c.params.v),
                    to_string(c.case_label.kind), csv_bool(c.regular), std::to_string(c.branch),
                    std::to_string(c.n_solutions), csv_bool(c.singular_only), csv_bool(c.near_singular)});
  }
  write_csv(path, header,
            {"mean", "f0", "v", "case", "regular", "branch", "n_solutions", "singular_only", "near_singular"}, rows);
}

void write_flow_map_csv(const std::filesystem::path& path, const FlowMap& map, const std::vector<std::string>& header) {
  std::vector<std::string> columns{"mean",           "f0",           "v",           "eps",
                                   "case",           "reduced_regular", "reduced_branch", "classification",
                                   "tens_steady",    "tens_agrees"};
  if (!map.cells.empty()) {
    for (const auto& w : map.cells.front().waves) {
      const std::string p = to_string(w.guess);
      for (const char* f : {"_converged", "_max_re", "_iterations", "_residual", "_spikes", "_duplicate_of"}) {
        columns.push_back(p + f);
      }
    }
  }
  std::vector<std::vector<std::string>> rows;
  rows.reserve(map.cells.size());
  for (const auto& c : map.cells) {
    std::vector<std::string> row{format_double(c.params.mean_psi),
                                 format_double(c.params.f0),
                                 format_double(c.params.v),
                                 format_double(c.params.eps),
                                 to_string(c.case_label.kind),
                                 csv_bool(c.reduced_regular),
                                 std::to_string(c.reduced_branch),
                                 to_string(c.classification),
                                 opt_bool(c.tens_steady),
                                 opt_bool(c.tens_agrees)};
    for (const auto& w : c.waves) {
      row.push_back(csv_bool(w.converged));
      row.push_back(w.converged ? format_double(w.max_re) : "");
      row.push_back(std::to_string(w.iterations));
      row.push_back(w.converged ? format_double(w.final_residual) : "");
      row.push_back(std::to_string(w.spikes));
      row.push_back(std::to_string(w.duplicate_of));
    }
    rows.push_back(std::move(row));
  }
  write_csv(path, header, columns, rows);
}

void write_neutral_curves_csv(const std::filesystem::path& path, const FlowMap& map,
                              const std::vector<std::string>& header) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& curve : map.neutral_curves) {
    for (const auto& p : curve.points) {
      rows.push_back({to_string(curve.mode), format_double(p.mean), format_double(p.f0), format_double(p.f0_lo),
                      format_double(p.f0_hi), format_double(p.max_re), csv_bool(p.stable_below),
                      csv_bool(p.crossing)});
    }
  }
  write_csv(path, header, {"curve", "mean", "f0", "f0_lo", "f0_hi", "max_re", "stable_below", "crossing"}, rows);
}

std::string reduced_map_json(const ReducedMap& map, const RunConfig& cfg) {
  json cells = json::array();
  for (const auto& c : map.cells) {
    cells.push_back({{"mean", c.params.mean_psi},
                     {"f0", c.params.f0},
                     {"case", to_string(c.case_label.kind)},
                     {"regular", c.regular},
                     {"branch", c.branch},
                     {"n_solutions", c.n_solutions},
                     {"singular_only", c.singular_only},
                     {"near_singular", c.near_singular},
                     {"error", c.error}});
  }
  json doc{{"version", kVersion},
           {"config", config_json(cfg)},
           {"axes", {{"mean", map.grid.means()}, {"f0", map.grid.f0s()}, {"v", map.v}}},
           {"wedge_violations", map.wedge_violations()},
           {"cells", cells}};
  return doc.dump(1);
}

std::string flow_map_json(const FlowMap& map, const RunConfig& cfg) {
  json cells = json::array();
  for (const auto& c : map.cells) {
    json waves = json::array();
    for (const auto& w : c.waves) {
      json wj{{"guess", to_string(w.guess)},
              {"converged", w.converged},
              {"iterations", w.iterations},
              {"spikes", w.spikes},
              {"duplicate_of", w.duplicate_of},
              {"from_continuation", w.from_continuation},
              {"anchored", w.anchored}};
      if (w.converged) {
        wj["max_re"] = w.max_re;
        wj["final_residual"] = w.final_residual;
      } else {
        wj["error"] = w.error;
      }
      waves.push_back(std::move(wj));
    }
    json cj{{"mean", c.params.mean_psi},
            {"f0", c.params.f0},
            {"case", to_string(c.case_label.kind)},
            {"reduced_regular", c.reduced_regular},
            {"reduced_branch", c.reduced_branch},
            {"classification", to_string(c.classification)},
            {"waves", waves}};
    if (c.tens_steady) cj["tens_steady"] = *c.tens_steady;
    if (c.tens_agrees) cj["tens_agrees"] = *c.tens_agrees;
    cells.push_back(std::move(cj));
  }
  json curves = json::object();
  for (const auto& curve : map.neutral_curves) {
    json pts = json::array();
    for (const auto& p : curve.points) {
      pts.push_back({{"mean", p.mean},
                     {"f0", p.f0},
                     {"f0_lo", p.f0_lo},
                     {"f0_hi", p.f0_hi},
                     {"max_re", p.max_re},
                     {"stable_below", p.stable_below},
                     {"crossing", p.crossing}});
    }
    curves[to_string(curve.mode)] = std::move(pts);
  }
  json doc{{"version", kVersion},
           {"config", config_json(cfg)},
           {"axes", {{"mean", map.grid.means()}, {"f0", map.grid.f0s()}, {"v", map.v}, {"eps", map.eps}, {"n", map.n}}},
           {"cells", cells},
           {"neutral_curves", curves}};
  return doc.dump(1);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out = open_out(path);
  out << text << '\n';
  if (!out) throw SolverError(ErrorCode::Io, "write failed: " + path.string());
}

}  // namespace chwave
