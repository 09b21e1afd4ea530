#include "chwave/cartographer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <stdexcept>
#include <thread>

#include "chwave/error.hpp"

namespace chwave {

namespace {

std::vector<double> axis(double lo, double hi, double step) {
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  std::vector<double> out(count);
  // Multiples of the step rather than repeated addition, so 0.15 prints as 0.15.
  for (std::size_t i = 0; i < count; ++i) out[i] = std::round((lo + i * step) * 1e12) / 1e12;
  return out;
}

// Runs fn(0..count-1) on up to `jobs` threads. Every index writes only its own
// slot, so the result is independent of scheduling.
template <class Fn>
void parallel_for(std::size_t count, int jobs, Fn fn) {
  const std::size_t workers = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, jobs)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count && !failed; i = next++) {
        try {
          fn(i);
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

bool is_spike_kind(GuessKind kind) {
  return kind == GuessKind::A1 || kind == GuessKind::A3 || kind == GuessKind::NSpike;
}

// One Newton solve plus spectrum; failures are recorded in the result.
WaveResult solve_cell_mode(const ProblemParams& p, const GuessLabel& label, const std::vector<double>* previous,
                       const FullScanConfig& cfg) {
  WaveResult out;
  out.guess = label;
  std::optional<TravellingWave> wave;
  if (previous != nullptr) {
    try {
      wave = newton_linesearch(*previous, p, Model::Full, cfg.newton, label);
      out.from_continuation = true;
    } catch (const SolverError&) {
    }
  }
  if (!wave) {
    try {
      wave = solve_wave(p, cfg.n, label, Model::Full, cfg.newton, cfg.phase_trials);
    } catch (const SolverError& e) {
      out.error = e.what();
      return out;
    }
  }
  try {
    out.max_re = max_growth_rate(wave->profile, p.eps, cfg.stability);
  } catch (const SolverError& e) {
    out.error = e.what();
    return out;
  }
  out.converged = true;
  out.iterations = wave->iterations;
  out.final_residual = wave->final_residual;
  out.spikes = count_spikes(wave->profile.values());
  out.profile = wave->profile.vector();
  return out;
}

bool stable(const WaveResult& w, double tol) { return w.converged && w.max_re < -tol; }

}  // namespace

void ScanGrid::validate() const {
  if (!(mean_step > 0.0) || !(f0_step > 0.0)) throw std::invalid_argument("ScanGrid: steps must be > 0");
  if (mean_max < mean_min || f0_max < f0_min) throw std::invalid_argument("ScanGrid: max < min");
  if (f0_min < 0.0) throw std::invalid_argument("ScanGrid: f0 must be >= 0");
}

std::vector<double> ScanGrid::means() const {
  validate();
  return axis(mean_min, mean_max, mean_step);
}

std::vector<double> ScanGrid::f0s() const {
  validate();
  return axis(f0_min, f0_max, f0_step);
}

std::size_t ReducedMap::wedge_violations() const {
  return static_cast<std::size_t>(std::count_if(cells.begin(), cells.end(), [](const ReducedCell& c) {
    return c.case_label.kind != CaseKind::NoCase && !c.regular;
  }));
}

ReducedMap scan_reduced(const ScanGrid& grid, double v, const ReducedScanConfig& cfg) {
  ReducedMap map;
  map.grid = grid;
  map.v = v;
  const auto means = grid.means();
  const auto f0s = grid.f0s();
  map.n_mean = means.size();
  map.n_f0 = f0s.size();
  map.cells.resize(map.n_mean * map.n_f0);

  parallel_for(map.cells.size(), cfg.jobs, [&](std::size_t idx) {
    ReducedCell& cell = map.cells[idx];
    cell.params = make_params(means[idx / map.n_f0], f0s[idx % map.n_f0], v);
    try {
      cell.case_label = classify_case(cell.params);
      const ReducedScanPoint point = solve_reduced_all_branches(cell.params, cfg.shooting);
      cell.n_solutions = static_cast<int>(point.solutions.size());
      cell.regular = !point.solutions.empty();
      cell.singular_only = !cell.regular && point.any_singular_only;
      if (cell.regular) {
        cell.branch = point.solutions.front().branch.j;
        cell.near_singular = point.solutions.front().near_singular;
      }
    } catch (const std::exception& e) {
      cell.error = e.what();
    }
  });
  return map;
}

std::string to_string(CellClass c) {
  switch (c) {
    case CellClass::A1Stable: return "A1_stable";
    case CellClass::A2Stable: return "A2_stable";
    case CellClass::A1A2Both: return "A1A2_both";
    case CellClass::NoStableWave: return "NoStableWave";
    case CellClass::Unresolved: return "Unresolved";
  }
  return "Unresolved";
}

std::string to_string(NeutralMode m) {
  switch (m) {
    case NeutralMode::NC1: return "NC1";
    case NeutralMode::NC2: return "NC2";
    case NeutralMode::NC3: return "NC3";
  }
  return "NC1";
}

NeutralMode parse_neutral_mode(const std::string& text) {
  if (text == "NC1" || text == "nc1") return NeutralMode::NC1;
  if (text == "NC2" || text == "nc2") return NeutralMode::NC2;
  if (text == "NC3" || text == "nc3") return NeutralMode::NC3;
  throw std::invalid_argument("unknown neutral curve '" + text + "'");
}

GuessKind neutral_mode_kind(NeutralMode m) {
  switch (m) {
    case NeutralMode::NC1: return GuessKind::A1;
    case NeutralMode::NC2: return GuessKind::A3;
    case NeutralMode::NC3: return GuessKind::A2;
  }
  return GuessKind::A1;
}

const WaveResult* ScanCell::wave(GuessKind kind) const {
  for (const auto& w : waves) {
    if (w.guess.kind == kind) return &w;
  }
  return nullptr;
}

const WaveResult* ScanCell::mode(GuessKind kind) const {
  const WaveResult* w = wave(kind);
  if (w == nullptr || !w->converged || w->duplicate_of >= 0) return nullptr;
  return w;
}

const NeutralCurve* FlowMap::curve(NeutralMode m) const {
  for (const auto& c : neutral_curves) {
    if (c.mode == m) return &c;
  }
  return nullptr;
}

void FullScanConfig::validate() const {
  if (n < 8 || n % 2 != 0) throw std::invalid_argument("FullScanConfig: n must be even and >= 8");
  if (modes.empty()) throw std::invalid_argument("FullScanConfig: no modes");
  if (tens_stride < 0) throw std::invalid_argument("FullScanConfig: tens_stride must be >= 0");
  if (!(neutral_tol > 0.0)) throw std::invalid_argument("FullScanConfig: neutral_tol must be > 0");
  newton.validate();
  if (tens_stride > 0) tens.validate();
}

CellClass classify_cell(const std::vector<WaveResult>& waves) {
  constexpr double tol = 0.0;
  bool any = false;
  bool a1 = false;
  bool a2 = false;
  for (const auto& w : waves) {
    if (!w.converged) continue;
    any = true;
    if (w.duplicate_of >= 0 || !stable(w, tol)) continue;
    if (w.guess.kind == GuessKind::A2) a2 = true;
    if (w.guess.kind == GuessKind::A1 || w.guess.kind == GuessKind::A3) a1 = true;
  }
  if (a1 && a2) return CellClass::A1A2Both;
  if (a1) return CellClass::A1Stable;
  if (a2) return CellClass::A2Stable;
  return any ? CellClass::NoStableWave : CellClass::Unresolved;
}

FlowMap scan_full(const ScanGrid& grid, double v, double eps, const FullScanConfig& cfg) {
  if (!(eps > 0.0)) throw std::invalid_argument("scan_full: eps must be > 0");
  cfg.validate();
  FlowMap map;
  map.grid = grid;
  map.v = v;
  map.eps = eps;
  map.n = cfg.n;
  const auto means = grid.means();
  const auto f0s = grid.f0s();
  map.n_mean = means.size();
  map.n_f0 = f0s.size();
  map.cells.resize(map.n_mean * map.n_f0);
  const std::size_t n_modes = cfg.modes.size();

  parallel_for(map.n_mean, cfg.jobs, [&](std::size_t im) {
    std::vector<std::vector<WaveResult>> column(map.n_f0, std::vector<WaveResult>(n_modes));
    for (std::size_t q = 0; q < n_modes; ++q) {
      const GuessLabel& label = cfg.modes[q];
      const bool downward = is_spike_kind(label.kind);
      const std::vector<double>* previous = nullptr;
      bool anchored = false;
      for (std::size_t s = 0; s < map.n_f0; ++s) {
        const std::size_t jf = downward ? map.n_f0 - 1 - s : s;
        const ProblemParams p = make_params(means[im], f0s[jf], v, eps);
        WaveResult& slot = column[jf][q];
        slot = solve_cell_mode(p, label, cfg.continuation ? previous : nullptr, cfg);
        slot.anchored = slot.converged && (slot.from_continuation ? anchored : s == 0);
        anchored = slot.anchored;
        previous = slot.converged ? &slot.profile : nullptr;
      }
    }

    for (std::size_t jf = 0; jf < map.n_f0; ++jf) {
      ScanCell& cell = map.cells[im * map.n_f0 + jf];
      cell.params = make_params(means[im], f0s[jf], v, eps);
      try {
        cell.case_label = classify_case(cell.params);
        ShootingConfig sc;
        sc.n_points = cfg.n;
        const ReducedScanPoint point = solve_reduced_all_branches(make_params(means[im], f0s[jf], v), sc);
        cell.reduced_regular = !point.solutions.empty();
        if (cell.reduced_regular) cell.reduced_branch = point.solutions.front().branch.j;
      } catch (const std::exception&) {
      }
      auto& solved = column[jf];
      for (std::size_t q = 0; q < n_modes; ++q) {
        if (!solved[q].converged || solved[q].duplicate_of >= 0) continue;
        std::vector<std::size_t> same{q};
        for (std::size_t e = q + 1; e < n_modes; ++e) {
          if (solved[e].converged && max_abs_diff(solved[e].profile, solved[q].profile) < cfg.duplicate_tol) {
            same.push_back(e);
          }
        }
        std::size_t owner = q;
        auto rank = [&](std::size_t e) {
          return 2 * int(solved[e].anchored) + int(cfg.modes[e].kind == GuessKind::A2);
        };
        for (std::size_t e : same) {
          if (rank(e) > rank(owner)) owner = e;
        }
        for (std::size_t e : same) {
          if (e != owner) solved[e].duplicate_of = static_cast<int>(owner);
        }
      }
      cell.waves = std::move(solved);
      cell.classification = classify_cell(cell.waves);

      const auto stride = static_cast<std::size_t>(cfg.tens_stride);
      if (stride > 0 && im % stride == 0 && jf % stride == 0) {
        bool steady = false;
        try {
          steady = run(cell.params, cfg.tens).steady;
        } catch (const SolverError&) {
        }
        const bool spectral = std::any_of(cell.waves.begin(), cell.waves.end(),
                                          [](const WaveResult& w) { return stable(w, 0.0); });
        cell.tens_steady = steady;
        cell.tens_agrees = steady == spectral;
      }
    }
  });

  if (cfg.neutral_curves) {
    for (NeutralMode m : {NeutralMode::NC1, NeutralMode::NC2, NeutralMode::NC3}) {
      const GuessKind kind = neutral_mode_kind(m);
      const bool requested = std::any_of(cfg.modes.begin(), cfg.modes.end(),
                                         [&](const GuessLabel& l) { return l.kind == kind; });
      if (requested) map.neutral_curves.push_back(trace_neutral_curve(map, m, cfg));
    }
  }
  return map;
}

namespace {

// Newton from `seed` at f0 on the map's column; max Re lambda of the result.
std::optional<std::pair<std::vector<double>, double>> continue_to(const FlowMap& map, double mean, double f0,
                                                                  const std::vector<double>& seed,
                                                                  const FullScanConfig& cfg) {
  const ProblemParams p = make_params(mean, f0, map.v, map.eps);
  try {
    const TravellingWave wave = newton_linesearch(seed, p, Model::Full, cfg.newton);
    return std::make_pair(wave.profile.vector(), max_growth_rate(wave.profile, map.eps, cfg.stability));
  } catch (const SolverError&) {
    return std::nullopt;
  }
}

}  // namespace

NeutralCurve trace_neutral_curve(const FlowMap& map, NeutralMode mode, const FullScanConfig& cfg) {
  NeutralCurve curve;
  curve.mode = mode;
  const GuessKind kind = neutral_mode_kind(mode);
  const auto f0s = map.grid.f0s();
  auto stable_at = [&](std::size_t im, std::size_t jf) {
    const WaveResult* w = map.at(im, jf).mode(kind);
    return w != nullptr && w->max_re < 0.0;
  };

  std::vector<std::vector<NeutralPoint>> per_column(map.n_mean);
  parallel_for(map.n_mean, cfg.jobs, [&](std::size_t im) {
    const double mean = map.at(im, 0).params.mean_psi;
    for (std::size_t jf = 0; jf + 1 < map.n_f0; ++jf) {
      const bool below = stable_at(im, jf);
      if (below == stable_at(im, jf + 1)) continue;
      const WaveResult& seed = *map.at(im, below ? jf : jf + 1).mode(kind);
      const WaveResult* other = map.at(im, below ? jf + 1 : jf).mode(kind);

      // s: stable end, u: the other end.
      double f_s = f0s[below ? jf : jf + 1];
      double f_u = f0s[below ? jf + 1 : jf];
      std::vector<double> wave_s = seed.profile;
      double re_s = seed.max_re;
      std::optional<double> re_u;
      if (other != nullptr) re_u = other->max_re;

      while (std::abs(f_u - f_s) > cfg.neutral_tol) {
        const double mid = 0.5 * (f_s + f_u);
        auto w = continue_to(map, mean, mid, wave_s, cfg);
        if (w && w->second < 0.0) {
          wave_s = std::move(w->first);
          re_s = w->second;
          f_s = mid;
        } else {
          f_u = mid;
          re_u = w ? std::optional<double>(w->second) : std::nullopt;
        }
      }
      NeutralPoint pt;
      pt.mean = mean;
      pt.f0_lo = std::min(f_s, f_u);
      pt.f0_hi = std::max(f_s, f_u);
      pt.stable_below = below;
      pt.crossing = re_u.has_value();
      pt.max_re = re_s;
      // Linear interpolation of max Re across a crossing; the bracket midpoint at a fold.
      pt.f0 = pt.crossing && *re_u != re_s ? f_s + (f_u - f_s) * re_s / (re_s - *re_u) : 0.5 * (f_s + f_u);
      per_column[im].push_back(pt);
    }
  });
  for (auto& pts : per_column) {
    for (auto& p : pts) curve.points.push_back(p);
  }
  return curve;
}

}  // namespace chwave
