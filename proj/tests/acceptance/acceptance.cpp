// Acceptance suite. Prints one PASS/FAIL line per criterion and a summary.
//
//   chwave_acceptance [--strict] [criterion ...]
//
// With --strict the exit status is 1 if any selected criterion fails; ctest
// runs each criterion this way. Without it the program only reports.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "chwave/cartographer.hpp"
#include "chwave/derivatives.hpp"
#include "chwave/error.hpp"
#include "chwave/newton.hpp"
#include "chwave/reduced.hpp"
#include "chwave/spectral.hpp"
#include "chwave/stability.hpp"
#include "chwave/tens.hpp"

using namespace chwave;

namespace {

// Tolerances ---------------------------------------------------------------

constexpr double kC1ProfileTol = 1e-4;
constexpr int kC1MaxIterations = 60;
constexpr double kC2ProfileTol = 1e-2;
constexpr double kC2LocationTol = 0.05;  // fraction of L
constexpr double kC3ProfileTol = 1e-2;
constexpr double kC3DriftTol = 1e-10;
constexpr double kC4TargetRate = 1669.0;
constexpr double kC4RateFactor = 2.0;
constexpr double kC5Ratio = 4.0;
constexpr double kC5RatioTol = 0.2;  // relative
constexpr double kC6RelTol = 1e-6;
constexpr double kC8SymmetryTol = 1e-6;  // relative to max(1, |lambda|)
constexpr double kC8NeutralTol = 2e-3;   // two bisection brackets
constexpr double kC8ExchangeGap = 0.1;   // NC1/NC3 points this close in f0 are the same crossing
constexpr double kC9JacobianTol = 1e-6;
constexpr double kC9FftTol = 1e-12;
constexpr double kC9OrderMin = 3.8;
constexpr double kC9OrderMax = 4.3;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double limit_s;
  std::function<Outcome()> run;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

void note(const std::string& s) { std::printf("    %s\n", s.c_str()); }

// 1 ------------------------------------------------------------------------

Outcome cross_solver() {
  const auto p = make_params(0.7, 1.0, 1.0);
  const int n = 500;
  Outcome o;
  std::optional<ReducedSolution> shot;
  try {
    ShootingConfig sc;
    sc.n_points = n;
    shot = solve_reduced(p, sc);
  } catch (const SolverError& e) {
    note(std::string("shooting: ") + e.what());
  }
  std::optional<TravellingWave> newton;
  try {
    newton = newton_linesearch(guess_a2(p, n), p, Model::Reduced, {}, {GuessKind::A2, 0, +1});
    const auto psi = newton->profile.values();
    std::size_t extrema = 0;
    for (std::size_t i = 0; i < psi.size(); ++i) {
      const double l = psi[i] - psi[(i + psi.size() - 1) % psi.size()], r = psi[(i + 1) % psi.size()] - psi[i];
      extrema += l * r < 0.0;
    }
    note(fmt("newton: %d iterations, F.F/2 = %.3e, %.3f of the points are local extrema", newton->iterations,
             newton->final_residual, static_cast<double>(extrema) / psi.size()));
  } catch (const SolverError& e) {
    note(std::string("newton: ") + e.what());
  }
  if (!shot || !newton) {
    o.detail = !shot ? "no regular shooting solution" : "newton did not converge";
    return o;
  }
  const double gap = max_abs_diff(shot->profile.values(), newton->profile.values());
  o.pass = gap <= kC1ProfileTol && newton->iterations <= kC1MaxIterations;
  o.detail = fmt("max gap %.3e (tol %.0e), %d iterations (max %d)", gap, kC1ProfileTol, newton->iterations,
                 kC1MaxIterations);
  return o;
}

// 2 ------------------------------------------------------------------------

Outcome reduced_vs_full() {
  const int n = 512;
  ShootingConfig sc;
  sc.n_points = n;
  Outcome o;

  const auto pa = make_params(0.7, 0.12, 1.0, 1e-4);
  bool a_ok = false;
  try {
    const auto red = solve_reduced(pa, sc);
    const auto full = newton_linesearch(red.profile.values(), pa, Model::Full);
    const double gap = max_abs_diff(red.profile.values(), full.profile.values());
    a_ok = gap <= kC2ProfileTol;
    note(fmt("f0 = 0.12: max gap %.3e (tol %.0e)", gap, kC2ProfileTol));
  } catch (const SolverError& e) {
    note(std::string("f0 = 0.12: ") + e.what());
  }

  const auto pb = make_params(0.7, 0.24, 1.0, 1e-4);
  bool b_ok = false;
  try {
    const auto red = solve_reduced(pb, sc);
    const auto full = newton_linesearch(red.profile.values(), pb, Model::Full);
    int i_gap = 0, i_cusp = 0;
    double gap = -1.0, cusp = INFINITY;
    for (int i = 0; i < n; ++i) {
      const double d = std::abs(full.profile[i] - red.profile[i]);
      if (d > gap) gap = d, i_gap = i;
      const double c = std::abs(red.profile[i] - kInvSqrt3);
      if (c < cusp) cusp = c, i_cusp = i;
    }
    const int di = std::abs(i_gap - i_cusp);
    const double dist = static_cast<double>(std::min(di, n - di)) / n;
    b_ok = dist <= kC2LocationTol;
    note(fmt("f0 = 0.24: max gap at eta = %.4f, near-cusp point at %.4f, distance %.4f L (tol %.2f)",
             red.profile.eta(i_gap), red.profile.eta(i_cusp), dist, kC2LocationTol));
  } catch (const SolverError& e) {
    note(std::string("f0 = 0.24: ") + e.what());
  }
  o.pass = a_ok && b_ok;
  o.detail = fmt("f0 = 0.12 %s, f0 = 0.24 %s", a_ok ? "ok" : "failed", b_ok ? "ok" : "failed");
  return o;
}

// 3 ------------------------------------------------------------------------

Outcome tens_vs_newton() {
  const auto p = make_params(0.5, 1.5, 1.0, 5e-4);
  TensConfig tc;
  tc.n_modes = 256;
  tc.dt = 1e-4;
  tc.t_final = 10.0;
  tc.seed = 42;
  tc.stop_when_steady = false;
  const TensResult r = run(p, tc);
  note(fmt("tens: t = %.2f, steady %s, drift %.2e", r.time, r.steady ? "yes" : "no", r.mean_drift));

  double best = INFINITY;
  for (const GuessLabel& l : {GuessLabel{GuessKind::A1, 1, +1}, GuessLabel{GuessKind::A2, 0, +1}}) {
    try {
      const auto w = solve_wave(p, tc.n_modes, l);
      const double re = max_growth_rate(w.profile, p.eps);
      const double gap = max_abs_diff(w.profile.values(), r.final.values());
      note(fmt("newton %s: max Re lambda %.3f, gap to tens %.3e", to_string(l).c_str(), re, gap));
      if (re < 0.0) best = std::min(best, gap);
    } catch (const SolverError& e) {
      note("newton " + to_string(l) + ": " + e.what());
    }
  }
  Outcome o;
  o.pass = best <= kC3ProfileTol && r.mean_drift <= kC3DriftTol;
  o.detail = fmt("gap to stable newton wave %.3e (tol %.0e), drift %.2e (tol %.0e)", best, kC3ProfileTol,
                 r.mean_drift, kC3DriftTol);
  return o;
}

// 4 ------------------------------------------------------------------------

Outcome spike_zoo() {
  struct Case {
    double mean, eps;
    int spikes, n;
  };
  std::vector<Case> cases{{0.65, 5e-4, 2, 256}};
  for (int s = 2; s <= 6; ++s) cases.push_back({0.1, 5e-4, s, 256});
  cases.push_back({0.1, 1e-4, 15, 512});

  int good = 0;
  for (const Case& c : cases) {
    const auto p = make_params(c.mean, 0.1, 1.0, c.eps);
    const std::string where = fmt("<psi> = %.2f eps = %.0e n = %d", c.mean, c.eps, c.spikes);
    try {
      const auto w = solve_wave(p, c.n, {GuessKind::NSpike, c.spikes, +1}, Model::Full, {}, 4);
      const int found = count_spikes(w.profile.values());
      const double re = max_growth_rate(w.profile, c.eps);
      bool ok = found == c.spikes && re > 0.0;
      if (c.spikes == 15) ok = ok && re >= kC4TargetRate / kC4RateFactor && re <= kC4TargetRate * kC4RateFactor;
      good += ok;
      note(fmt("%s: converged, %d spikes, max Re lambda %.4g%s", where.c_str(), found, re, ok ? "" : "  <-- fails"));
    } catch (const SolverError& e) {
      note(where + ": " + e.what());
    }
  }
  Outcome o;
  o.pass = good == static_cast<int>(cases.size());
  o.detail = fmt("%d of %zu spike waves meet the criterion", good, cases.size());
  return o;
}

// 5 ------------------------------------------------------------------------

Outcome asymptotic_order() {
  ShootingConfig sc;
  sc.n_points = 500;
  std::vector<double> err;
  for (double f0 : {1e-2, 5e-3, 2.5e-3}) {
    const auto p = make_params(0.7, f0, 1.0);
    err.push_back(max_abs_diff(solve_reduced(p, sc).profile.values(), asymptotic_small_f0(p, sc.n_points).values()));
  }
  const double r1 = err[0] / err[1], r2 = err[1] / err[2];
  auto ok = [](double r) { return std::abs(r - kC5Ratio) <= kC5RatioTol * kC5Ratio; };
  Outcome o;
  o.pass = ok(r1) && ok(r2);
  o.detail = fmt("errors %.3e %.3e %.3e, ratios %.3f %.3f (4 +- 20%%)", err[0], err[1], err[2], r1, r2);
  return o;
}

// 6 ------------------------------------------------------------------------

Outcome dispersion() {
  const int n = 128;
  double worst = 0.0;
  for (double c0 : {0.7, 0.1}) {
    for (double eps : {0.0, 5e-4}) {
      const auto p = make_params(c0, 0.0, 1.0);
      const auto r = compute_spectrum(Profile(p, std::vector<double>(n, c0)), eps);
      for (int j = -n / 8; j <= n / 8; ++j) {
        if (j == 0) continue;
        const double q = kTwoPi * j;
        const std::complex<double> ref(-(3 * c0 * c0 - 1) * q * q - eps * q * q * q * q, q);
        double best = INFINITY;
        for (const auto& z : r.spectrum) best = std::min(best, std::abs(z - ref));
        worst = std::max(worst, best / std::abs(ref));
      }
    }
  }
  Outcome o;
  o.pass = worst <= kC6RelTol;
  o.detail = fmt("worst relative mismatch %.2e over |j| <= N/8, c0 in {0.7, 0.1}, eps in {0, 5e-4} (tol %.0e)",
                 worst, kC6RelTol);
  return o;
}

// 7 ------------------------------------------------------------------------

Outcome bound_consistency() {
  ShootingConfig sc;
  sc.n_points = 256;
  int regular = 0, stable_bound = 0, unstable_bound = 0, bad = 0;
  for (int i = 0; i <= 20; ++i) {
    for (int j = 0; j <= 20; ++j) {
      const auto p = make_params(0.05 * i, 0.1 * j, 1.0);
      std::optional<ReducedSolution> s;
      try {
        s = solve_reduced(p, sc);
      } catch (const SolverError&) {
        continue;
      }
      ++regular;
      const auto r = compute_spectrum(s->profile, 0.0);
      if (r.bounds.stable_bound) {
        ++stable_bound;
        if (r.verdict != Verdict::Stable) {
          ++bad;
          note(fmt("stable bound but %s at (%.2f, %.2f)", to_string(r.verdict).c_str(), p.mean_psi, p.f0));
        }
      }
      if (r.bounds.unstable_bound) {
        ++unstable_bound;
        if (r.verdict != Verdict::Unstable) {
          ++bad;
          note(fmt("unstable bound but %s at (%.2f, %.2f)", to_string(r.verdict).c_str(), p.mean_psi, p.f0));
        }
      }
    }
  }
  Outcome o;
  o.pass = bad == 0 && stable_bound > 0 && unstable_bound > 0;
  o.detail = fmt("%d regular cells, %d with the stability bound, %d with the instability bound, %d counterexamples",
                 regular, stable_bound, unstable_bound, bad);
  return o;
}

// 8 ------------------------------------------------------------------------

std::map<long, double> lowest_nc1(const FlowMap& map) {
  std::map<long, double> out;
  if (const NeutralCurve* c = map.curve(NeutralMode::NC1)) {
    for (const auto& pt : c->points) {
      const long key = std::lround(pt.mean * 1000);
      auto it = out.find(key);
      if (it == out.end() || pt.f0 < it->second) out[key] = pt.f0;
    }
  }
  return out;
}

bool sign_check(const ScanCell& c, bool a2_stable) {
  const WaveResult* a1 = c.mode(GuessKind::A1);
  const WaveResult* a2 = c.mode(GuessKind::A2);
  if (a2_stable) return a2 && a2->max_re < 0.0 && a1 && a1->max_re > 0.0;
  return a1 && a1->max_re < 0.0 && (!a2 || a2->max_re > 0.0);
}

Outcome map_properties() {
  const FullScanConfig base;
  bool ok = true;
  std::vector<std::string> parts;

  // Wedges inside the regular region, and the reduced map's reflection symmetry.
  {
    const ScanGrid g{-1.0, 1.0, 0.05, 0.0, 2.0, 0.05};
    const ReducedMap m = scan_reduced(g, 1.0);
    std::size_t asym = 0;
    for (std::size_t i = 0; i < m.n_mean; ++i) {
      for (std::size_t j = 0; j < m.n_f0; ++j) {
        const auto& a = m.at(i, j);
        const auto& b = m.at(m.n_mean - 1 - i, j);
        if (a.regular != b.regular || (a.regular && a.branch != 2 - b.branch)) ++asym;
      }
    }
    const bool pass = m.wedge_violations() == 0 && asym == 0;
    ok = ok && pass;
    note(fmt("reduced map: %zu cells, %zu wedge violations, %zu asymmetric cells", m.cells.size(),
             m.wedge_violations(), asym));
    parts.push_back(std::string("wedges/symmetry ") + (pass ? "ok" : "failed"));
  }

  FullScanConfig cfg = base;
  cfg.tens_stride = 0;
  const FlowMap m05 = scan_full(ScanGrid{}, 0.5, 5e-4, cfg);
  cfg.tens_stride = base.tens_stride;
  const FlowMap m1 = scan_full(ScanGrid{}, 1.0, 5e-4, cfg);
  cfg.tens_stride = 0;
  const FlowMap m2 = scan_full(ScanGrid{0.0, 1.0, 0.05, 0.0, 4.0, 0.1}, 2.0, 5e-4, cfg);

  // Full-map reflection symmetry on a subset of columns.
  {
    FullScanConfig sc = base;
    sc.tens_stride = 0;
    sc.neutral_curves = false;
    const FlowMap neg = scan_full(ScanGrid{-1.0, 0.0, 0.2, 0.0, 2.0, 0.05}, 1.0, 5e-4, sc);
    std::size_t mismatches = 0, compared = 0;
    for (std::size_t i = 0; i < neg.n_mean; ++i) {
      const std::size_t ip = static_cast<std::size_t>(std::lround(-neg.at(i, 0).params.mean_psi / 0.05));
      for (std::size_t j = 0; j < neg.n_f0; ++j) {
        const ScanCell& a = neg.at(i, j);
        const ScanCell& b = m1.at(ip, j);
        ++compared;
        bool same = a.classification == b.classification;
        for (std::size_t k = 0; k < a.waves.size(); ++k) {
          const auto& wa = a.waves[k];
          const auto& wb = b.waves[k];
          same = same && wa.converged == wb.converged;
          if (wa.converged && wb.converged) {
            same = same && std::abs(wa.max_re - wb.max_re) <= kC8SymmetryTol * std::max(1.0, std::abs(wb.max_re));
          }
        }
        if (!same) {
          ++mismatches;
          note(fmt("asymmetric cell: <psi> = %.2f, f0 = %.2f", a.params.mean_psi, a.params.f0));
        }
      }
    }
    const bool pass = mismatches == 0;
    ok = ok && pass;
    note(fmt("flow map symmetry: %zu of %zu mirrored cells differ", mismatches, compared));
    parts.push_back(std::string("flow-map symmetry ") + (pass ? "ok" : "failed"));
  }

  // NC1 ordering in v.
  {
    const auto a = lowest_nc1(m05), b = lowest_nc1(m1), c = lowest_nc1(m2);
    int shared = 0, violations = 0;
    for (const auto& [key, f1] : b) {
      if (!a.count(key) || !c.count(key)) continue;
      ++shared;
      const double f05 = a.at(key), f2 = c.at(key);
      const bool good = f2 >= f1 - kC8NeutralTol && f1 >= f05 - kC8NeutralTol;
      violations += !good;
      note(fmt("NC1 at <psi> = %.2f: v=0.5 %.4f, v=1 %.4f, v=2 %.4f%s", key / 1000.0, f05, f1, f2,
               good ? "" : "  <-- out of order"));
    }
    const bool pass = shared > 0 && violations == 0;
    ok = ok && pass;
    parts.push_back(fmt("NC1 ordering %d/%d columns", shared - violations, shared));
  }

  // Exchange of stability between A1 and A2 across NC3 at v = 1.
  {
    const NeutralCurve* nc1 = m1.curve(NeutralMode::NC1);
    const NeutralCurve* nc3 = m1.curve(NeutralMode::NC3);
    int columns = 0, passed = 0;
    if (nc1 && nc3) {
      for (const auto& p3 : nc3->points) {
        for (const auto& p1 : nc1->points) {
          if (std::abs(p1.mean - p3.mean) > 1e-9 || std::abs(p1.f0 - p3.f0) > kC8ExchangeGap) continue;
          ++columns;
          const double lo = std::min(p1.f0, p3.f0), hi = std::max(p1.f0, p3.f0);
          const std::size_t im = static_cast<std::size_t>(std::lround((p3.mean - m1.grid.mean_min) / m1.grid.mean_step));
          std::optional<std::size_t> below, above;
          for (std::size_t j = 0; j < m1.n_f0; ++j) {
            const double f = m1.at(im, j).params.f0;
            if (f < lo) below = j;
            if (f > hi && !above) above = j;
          }
          const bool good = below && above && sign_check(m1.at(im, *below), true) && sign_check(m1.at(im, *above), false);
          passed += good;
          note(fmt("NC3 at <psi> = %.2f: NC1 %.4f (%s), NC3 %.4f (%s); A2 stable / A1 unstable below, "
                   "A1 stable / A2 not above: %s",
                   p3.mean, p1.f0, p1.crossing ? "crossing" : "fold", p3.f0, p3.crossing ? "crossing" : "fold",
                   good ? "yes" : "no"));
        }
      }
    }
    const bool pass = columns > 0 && passed == columns;
    ok = ok && pass;
    parts.push_back(fmt("NC3 exchange %d/%d columns", passed, columns));
  }

  {
    int checked = 0, agree = 0;
    for (const auto& c : m1.cells) {
      if (!c.tens_agrees) continue;
      ++checked;
      agree += *c.tens_agrees;
    }
    note(fmt("v = 1 TENS cross-check: %d of %d sampled cells agree with the spectra", agree, checked));
  }

  Outcome o;
  o.pass = ok;
  for (std::size_t i = 0; i < parts.size(); ++i) o.detail += (i ? ", " : "") + parts[i];
  return o;
}

// 9 ------------------------------------------------------------------------

Outcome property_suite() {
  std::vector<std::string> failed;
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-1.0, 1.0);

  auto smooth = [&](int n, double mean) {
    std::vector<double> x(static_cast<std::size_t>(n), mean);
    for (int k = 1; k <= 4; ++k) {
      const double a = 0.4 * u(rng) / k, b = 0.4 * u(rng) / k;
      for (int i = 0; i < n; ++i) x[i] += a * std::cos(kTwoPi * k * i / n) + b * std::sin(kTwoPi * k * i / n);
    }
    return x;
  };

  // Mirror involution.
  {
    const auto p = make_params(0.3, 0.0, 1.0);
    const Profile a(p, smooth(256, 0.3));
    const Profile b = mirror_profile(mirror_profile(a));
    const double d = max_abs_diff(a.values(), b.values());
    note(fmt("mirror involution: max difference %.1e", d));
    if (d != 0.0 || !(b.params() == a.params())) failed.push_back("mirror");
  }

  // Jacobian against central differences.
  {
    double worst = 0.0;
    for (Model model : {Model::Reduced, Model::Full}) {
      const auto p = make_params(0.4, 0.5, 1.0, model == Model::Full ? 5e-4 : 0.0);
      const int n = 128;
      const auto psi = smooth(n, p.mean_psi);
      Eigen::VectorXd dir(n);
      for (int i = 0; i < n; ++i) dir[i] = u(rng);
      const double h = 1e-6;
      std::vector<double> plus = psi, minus = psi;
      for (int i = 0; i < n; ++i) plus[i] += h * dir[i], minus[i] -= h * dir[i];
      const auto fp = build_residual(plus, p, model), fm = build_residual(minus, p, model);
      const Eigen::VectorXd jd = build_jacobian(psi, p, model) * dir;
      const double scale = std::max(1.0, jd.lpNorm<Eigen::Infinity>());
      for (int i = 0; i < n; ++i) worst = std::max(worst, std::abs((fp[i] - fm[i]) / (2 * h) - jd[i]) / scale);
    }
    note(fmt("jacobian vs finite differences: %.2e (tol %.0e)", worst, kC9JacobianTol));
    if (worst > kC9JacobianTol) failed.push_back("jacobian");
  }

  // FFT round trip.
  {
    double worst = 0.0;
    for (int n : {16, 128, 500, 1024}) {
      std::vector<double> x(static_cast<std::size_t>(n));
      for (auto& v : x) v = u(rng);
      Fft fft(n);
      worst = std::max(worst, max_abs_diff(x, fft.inverse(fft.forward(x))));
    }
    note(fmt("fft round trip: %.2e (tol %.0e)", worst, kC9FftTol));
    if (worst > kC9FftTol) failed.push_back("fft");
  }

  // Monotone descent of the merit along accepted line-search steps.
  {
    int increases = 0;
    std::size_t steps = 0;
    const auto check = [&](const TravellingWave& w) {
      for (std::size_t i = 1; i < w.merit_history.size(); ++i) increases += w.merit_history[i] > w.merit_history[i - 1];
      steps += w.step_lengths.size();
    };
    check(solve_wave(make_params(0.5, 1.5, 1.0, 5e-4), 256, {GuessKind::A1, 1, +1}));
    check(solve_wave(make_params(0.7, 0.5, 1.0, 5e-4), 256, {GuessKind::A2, 0, +1}));
    try {
      const auto p = make_params(0.7, 1.0, 1.0);
      check(newton_linesearch(guess_a2(p, 500), p, Model::Reduced));
    } catch (const SolverError&) {
    }
    note(fmt("line search: %d merit increases over %zu steps", increases, steps));
    if (increases != 0 || steps == 0) failed.push_back("line search");
  }

  // Fourth-order convergence of the stencils under grid doubling.
  {
    const auto exact = [](int order, double x) {
      const double k = kTwoPi, s = std::sin(k * x), c = std::cos(k * x), e = std::exp(s);
      switch (order) {
        case 1: return k * c * e;
        case 2: return k * k * e * (c * c - s);
        case 3: return k * k * k * e * c * (c * c - 3 * s - 1);
        default: return k * k * k * k * e * (c * c * c * c - 6 * s * c * c + 3 * s * s - 4 * c * c + s);
      }
    };
    const auto error = [&](int order, int n) {
      std::vector<double> f(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) f[i] = std::exp(std::sin(kTwoPi * i / n));
      const auto d = PeriodicStencil(order, n, 1.0).apply(f);
      double e = 0.0;
      for (int i = 0; i < n; ++i) e = std::max(e, std::abs(d[i] - exact(order, static_cast<double>(i) / n)));
      return e;
    };
    bool good = true;
    for (int order = 1; order <= 4; ++order) {
      const double rate = std::log2(error(order, 128) / error(order, 256));
      note(fmt("stencil order %d: observed rate %.3f", order, rate));
      good = good && rate >= kC9OrderMin && rate <= kC9OrderMax;
    }
    if (!good) failed.push_back("stencil order");
  }

  Outcome o;
  o.pass = failed.empty();
  o.detail = failed.empty() ? "all five properties hold" : "failed:";
  for (const auto& f : failed) o.detail += " " + f;
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  std::setvbuf(stdout, nullptr, _IONBF, 0);
  bool strict = false;
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--strict") == 0) {
      strict = true;
    } else {
      const int id = std::atoi(argv[i]);
      if (id < 1 || id > 9) {
        std::fprintf(stderr, "usage: %s [--strict] [criterion 1-9 ...]\n", argv[0]);
        return 64;
      }
      selected.insert(id);
    }
  }

  const std::vector<Criterion> criteria{
      {1, "cross-solver oracle", 5.0, cross_solver},
      {2, "reduced vs full agreement", 10.0, reduced_vs_full},
      {3, "TENS reaches the Newton wave", 120.0, tens_vs_newton},
      {4, "spike zoo", 300.0, spike_zoo},
      {5, "asymptotic order", 5.0, asymptotic_order},
      {6, "dispersion-relation spectrum", 5.0, dispersion},
      {7, "bound consistency", 300.0, bound_consistency},
      {8, "map properties", 1200.0, map_properties},
      {9, "property suite", 30.0, property_suite},
  };

  std::vector<int> failing;
  int evaluated = 0;
  for (const Criterion& c : criteria) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    std::printf("criterion %d: %s\n", c.id, c.name);
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("unexpected error: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= c.limit_s;
    const bool pass = o.pass && in_time;
    ++evaluated;
    if (!pass) failing.push_back(c.id);
    std::printf("%s criterion %d (%s): %s; %.1f s of %.0f s%s\n", pass ? "PASS" : "FAIL", c.id, c.name,
                o.detail.c_str(), secs, c.limit_s, in_time ? "" : " (over time)");
  }

  std::ostringstream fails;
  for (int id : failing) fails << ' ' << id;
  std::printf("acceptance: %d of %d criteria pass%s%s\n", evaluated - static_cast<int>(failing.size()), evaluated,
              failing.empty() ? "" : "; failing:", fails.str().c_str());
  return strict && !failing.empty() ? 1 : 0;
}
