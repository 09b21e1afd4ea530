#include "chwave/reduced.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "chwave/derivatives.hpp"
#include "chwave/error.hpp"

namespace chwave {

namespace odeint = boost::numeric::odeint;

namespace {

constexpr double kTwoOverSqrt3 = 2.0 / std::numbers::sqrt3;
constexpr double kFoldScale = 1.5 * std::numbers::sqrt3;  // 3 sqrt3 / 2

using State = std::array<double, 1>;

// Thrown out of the observer to stop a trajectory at a fold crossing.
struct FoldCrossed {
  double eta;
};

}  // namespace

bool branch_real(BranchIndex branch, double x, double clamp_tol) {
  switch (branch.j) {
    case 0: return x >= -kFoldX - clamp_tol;
    case 1: return std::abs(x) <= kFoldX + clamp_tol;
    case 2: return x <= kFoldX + clamp_tol;
    default: throw std::invalid_argument("branch index must be 0, 1 or 2");
  }
}

std::optional<double> branch_value(BranchIndex branch, double x, double clamp_tol) {
  if (!branch_real(branch, x, clamp_tol)) return std::nullopt;
  double s = kFoldScale * x;
  switch (branch.j) {
    case 0:
      if (s > 1.0) return kTwoOverSqrt3 * std::cosh(std::acosh(s) / 3.0);
      s = std::max(s, -1.0);
      return kTwoOverSqrt3 * std::cos(std::acos(s) / 3.0);
    case 1:
      s = std::clamp(s, -1.0, 1.0);
      return kTwoOverSqrt3 * std::cos(std::acos(s) / 3.0 - kTwoPi / 3.0);
    default:
      if (s < -1.0) return -kTwoOverSqrt3 * std::cosh(std::acosh(-s) / 3.0);
      s = std::min(s, 1.0);
      return kTwoOverSqrt3 * std::cos(std::acos(s) / 3.0 - 2.0 * kTwoPi / 3.0);
  }
}

BranchIndex branch_of(double psi) {
  if (psi >= kInvSqrt3) return {0};
  if (psi <= -kInvSqrt3) return {2};
  return {1};
}

Trajectory integrate_dX(const ProblemParams& params, BranchIndex branch, double x0,
                        int n_points, double rk_tol) {
  if (n_points < 1) throw std::invalid_argument("integrate_dX: n_points must be >= 1");
  if (!std::isfinite(x0)) throw std::invalid_argument("integrate_dX: non-finite x0");

  Trajectory traj;
  traj.x.reserve(static_cast<std::size_t>(n_points) + 1);
  traj.x.push_back(x0);
  if (!branch_real(branch, x0)) {
    traj.status = TrajectoryStatus::Singular;
    traj.exit_eta = 0.0;
    return traj;
  }

  const double m = params.mean_psi;
  const double v = params.v;
  const double f0 = params.f0;
  const double k = params.k_wave;
  const double inv_d = 1.0 / params.d_mob;

  auto rhs = [&](const State& x, State& dxdt, double eta) {
    // Past the fold the value is clamped; the observer rejects such states.
    double psi;
    if (auto val = branch_value(branch, x[0], std::numeric_limits<double>::infinity())) {
      psi = *val;
    } else {
      psi = branch.j == 0 ? kInvSqrt3 : -kInvSqrt3;
    }
    dxdt[0] = -inv_d * (v * (psi - m) + f0 * std::sin(k * eta));
  };
  auto observer = [&](const State& x, double eta) {
    if (!branch_real(branch, x[0])) throw FoldCrossed{eta};
  };

  auto stepper = odeint::make_controlled(rk_tol, rk_tol, odeint::runge_kutta_fehlberg78<State>());
  const double h = params.l_period / n_points;
  State state{x0};
  double dt = std::min(h, 1e-3 * params.l_period);
  try {
    for (int i = 0; i < n_points; ++i) {
      const double t0 = i * h;
      const double t1 = (i + 1 == n_points) ? params.l_period : (i + 1) * h;
      odeint::integrate_adaptive(stepper, rhs, state, t0, t1, dt, observer);
      traj.x.push_back(state[0]);
    }
  } catch (const FoldCrossed& crossed) {
    traj.status = TrajectoryStatus::Singular;
    traj.exit_eta = crossed.eta;
  } catch (const std::exception&) {
    traj.status = TrajectoryStatus::IntegrationFailure;
  }
  return traj;
}

namespace {

struct Shot {
  double a = 0.0;
  double g = std::numeric_limits<double>::quiet_NaN();
  bool regular = false;
};

Shot shoot_once(const ProblemParams& params, BranchIndex branch, double a, int n, double tol) {
  const double x0 = a * a * a - a;
  const Trajectory traj = integrate_dX(params, branch, x0, n, tol);
  Shot shot;
  shot.a = a;
  if (traj.status == TrajectoryStatus::Ok) {
    shot.g = traj.x.back() - x0;
    shot.regular = std::isfinite(shot.g);
  }
  return shot;
}

// Illinois-modified regula falsi on a bracket [lo, hi] with g(lo) g(hi) < 0,
// falling back to bisection whenever the secant stalls or a shot is singular.
std::optional<double> refine_root(const ProblemParams& params, BranchIndex branch, Shot lo, Shot hi,
                                  const ShootingConfig& cfg) {
  constexpr int kCoarse = 16;
  int stalled = 0;
  int side = 0;
  double width = std::abs(hi.a - lo.a);
  for (int it = 0; it < 200; ++it) {
    double c;
    const double glo = side == -1 ? 0.5 * lo.g : lo.g;
    const double ghi = side == +1 ? 0.5 * hi.g : hi.g;
    if (stalled >= 2) {
      c = 0.5 * (lo.a + hi.a);
      stalled = 0;
    } else {
      c = hi.a - ghi * (hi.a - lo.a) / (ghi - glo);
      if (!(c > std::min(lo.a, hi.a) && c < std::max(lo.a, hi.a))) c = 0.5 * (lo.a + hi.a);
    }
    Shot mid = shoot_once(params, branch, c, kCoarse, cfg.rk_tol);
    if (!mid.regular) {
      mid = shoot_once(params, branch, 0.5 * (lo.a + hi.a), kCoarse, cfg.rk_tol);
      if (!mid.regular) return std::nullopt;
    }
    if (std::abs(mid.g) < cfg.root_tol) return mid.a;
    if ((mid.g < 0.0) == (lo.g < 0.0)) {
      lo = mid;
      side = side == -1 ? 0 : +1;
    } else {
      hi = mid;
      side = side == +1 ? 0 : -1;
    }
    const double new_width = std::abs(hi.a - lo.a);
    if (new_width > 0.5 * width) ++stalled;
    width = new_width;
    if (width < 1e-15 * std::max(1.0, std::abs(lo.a))) {
      return std::abs(lo.g) < std::abs(hi.g) ? lo.a : hi.a;
    }
  }
  return std::nullopt;
}

ReducedSolution finish_solution(const ProblemParams& params, BranchIndex branch, double a,
                                const ShootingConfig& cfg) {
  const double x0 = a * a * a - a;
  const Trajectory traj = integrate_dX(params, branch, x0, cfg.n_points, cfg.rk_tol);
  if (traj.status != TrajectoryStatus::Ok) {
    throw SolverError(ErrorCode::SingularTrajectory, "converged shoot became singular at full resolution");
  }
  std::vector<double> psi(static_cast<std::size_t>(cfg.n_points));
  double min_abs_s = std::numeric_limits<double>::infinity();
  for (int i = 0; i < cfg.n_points; ++i) {
    const double value = *branch_value(branch, traj.x[static_cast<std::size_t>(i)]);
    psi[static_cast<std::size_t>(i)] = value;
    min_abs_s = std::min(min_abs_s, std::abs(3.0 * value * value - 1.0));
  }
  ReducedSolution sol{Profile(params, std::move(psi), 1e-6), branch, a,
                      std::abs(traj.x.back() - x0), false, false, min_abs_s};
  sol.regular = min_abs_s > 0.0;
  sol.near_singular = min_abs_s < cfg.near_singular_tol;
  return sol;
}

}  // namespace

std::vector<ReducedSolution> shoot_periodic_all(const ProblemParams& params, BranchIndex branch,
                                                const ShootingConfig& cfg) {
  params.validate();
  if (params.v == 0.0) throw std::invalid_argument("shoot_periodic: v must be nonzero");
  if (cfg.bracket_samples < 2) throw std::invalid_argument("shoot_periodic: need >= 2 samples");

  const double r = std::abs(params.f0 / params.v);
  double lo = params.mean_psi - r;
  double hi = params.mean_psi + r;
  switch (branch.j) {
    case 0: lo = std::max(lo, kInvSqrt3); break;
    case 1: lo = std::max(lo, -kInvSqrt3); hi = std::min(hi, kInvSqrt3); break;
    case 2: hi = std::min(hi, -kInvSqrt3); break;
    default: throw std::invalid_argument("branch index must be 0, 1 or 2");
  }
  if (lo > hi) {
    throw SolverError(ErrorCode::NoPeriodicSolution, "interval I does not meet branch " +
                                                         std::to_string(branch.j));
  }

  constexpr int kCoarse = 16;
  std::vector<double> roots;
  bool any_regular = false;
  if (hi - lo < 1e-14) {
    const Shot s = shoot_once(params, branch, lo, kCoarse, cfg.rk_tol);
    any_regular = s.regular;
    if (s.regular && std::abs(s.g) < cfg.root_tol) roots.push_back(lo);
  } else {
    std::vector<Shot> shots;
    shots.reserve(static_cast<std::size_t>(cfg.bracket_samples));
    for (int i = 0; i < cfg.bracket_samples; ++i) {
      const double a = lo + (hi - lo) * i / (cfg.bracket_samples - 1);
      shots.push_back(shoot_once(params, branch, a, kCoarse, cfg.rk_tol));
      any_regular = any_regular || shots.back().regular;
    }
    // Near-cusp roots sit next to the edge of the regular set; pull the edge
    // in by bisection so a sign change there is not missed.
    for (std::size_t i = 0; i + 1 < shots.size(); ++i) {
      if (shots[i].regular == shots[i + 1].regular) continue;
      Shot good = shots[i].regular ? shots[i] : shots[i + 1];
      double bad = shots[i].regular ? shots[i + 1].a : shots[i].a;
      for (int it = 0; it < 60 && std::abs(good.a - bad) > 1e-14; ++it) {
        const Shot mid = shoot_once(params, branch, 0.5 * (good.a + bad), kCoarse, cfg.rk_tol);
        if (mid.regular) {
          good = mid;
        } else {
          bad = mid.a;
        }
      }
      if (good.a != shots[i].a && good.a != shots[i + 1].a) {
        shots.insert(shots.begin() + static_cast<std::ptrdiff_t>(i) + 1, good);
        ++i;
      }
    }
    for (std::size_t i = 0; i < shots.size(); ++i) {
      const Shot& s = shots[i];
      if (!s.regular) continue;
      if (std::abs(s.g) < cfg.root_tol) {
        if (roots.empty() || std::abs(roots.back() - s.a) > 1e-12) roots.push_back(s.a);
        continue;
      }
      if (i + 1 < shots.size()) {
        const Shot& t = shots[i + 1];
        if (t.regular && std::abs(t.g) >= cfg.root_tol && (s.g < 0.0) != (t.g < 0.0)) {
          if (auto root = refine_root(params, branch, s, t, cfg)) roots.push_back(*root);
        }
      }
    }
  }

  if (roots.empty()) {
    if (!any_regular) {
      throw SolverError(ErrorCode::SingularOnly,
                        "every shoot on branch " + std::to_string(branch.j) + " crossed the fold");
    }
    throw SolverError(ErrorCode::NoPeriodicSolution,
                      "no sign change of g on branch " + std::to_string(branch.j));
  }

  std::vector<ReducedSolution> out;
  for (double a : roots) {
    try {
      out.push_back(finish_solution(params, branch, a, cfg));
    } catch (const SolverError&) {
      // A root that only exists at coarse resolution is dropped.
    }
  }
  if (out.empty()) {
    throw SolverError(ErrorCode::SingularOnly, "roots on branch " + std::to_string(branch.j) +
                                                   " were singular at full resolution");
  }
  return out;
}

ReducedSolution shoot_periodic(const ProblemParams& params, BranchIndex branch,
                               const ShootingConfig& cfg) {
  return shoot_periodic_all(params, branch, cfg).front();
}

ReducedScanPoint solve_reduced_all_branches(const ProblemParams& params, const ShootingConfig& cfg) {
  ReducedScanPoint point;
  for (int j = 0; j < 3; ++j) {
    try {
      for (auto& sol : shoot_periodic_all(params, BranchIndex{j}, cfg)) {
        if (sol.regular) point.solutions.push_back(std::move(sol));
      }
    } catch (const SolverError& e) {
      if (e.code() == ErrorCode::SingularOnly) point.any_singular_only = true;
    }
  }
  return point;
}

ReducedSolution solve_reduced(const ProblemParams& params, const ShootingConfig& cfg) {
  ReducedScanPoint point = solve_reduced_all_branches(params, cfg);
  if (point.solutions.empty()) {
    if (point.any_singular_only) {
      throw SolverError(ErrorCode::SingularOnly, "only singular trajectories exist");
    }
    throw SolverError(ErrorCode::NoPeriodicSolution, "no periodic solution on any branch");
  }
  return std::move(point.solutions.front());
}

std::vector<double> small_f0_correction(const ProblemParams& params, int n) {
  const double s0 = 3.0 * params.mean_psi * params.mean_psi - 1.0;
  if (std::abs(s0) < 1e-8) {
    throw SolverError(ErrorCode::DegenerateMean, "3<psi>^2 - 1 vanishes");
  }
  const double kappa = (params.v / params.d_mob) / s0;
  const double k = params.k_wave;
  const double amp = kappa * kappa / (k * k + kappa * kappa);
  const std::vector<double> eta = make_grid(params, n);
  std::vector<double> phi(eta.size());
  for (std::size_t i = 0; i < eta.size(); ++i) {
    // v = 0: D s0 phi' = -sin(k eta) integrates to cos(k eta) / (k D s0).
    const double cos_term = kappa != 0.0 ? (k / kappa) * std::cos(k * eta[i]) : 0.0;
    phi[i] = kappa != 0.0 ? amp * (cos_term - std::sin(k * eta[i]))
                          : std::cos(k * eta[i]) / (k * params.d_mob * s0);
  }
  return phi;
}

Profile asymptotic_small_f0(const ProblemParams& params, int n) {
  std::vector<double> psi = small_f0_correction(params, n);
  for (double& x : psi) x = params.mean_psi + params.f0 * x;
  return Profile(params, std::move(psi));
}

std::vector<double> reduced_residual_vector(const Profile& p) {
  const ProblemParams& prm = p.params();
  const int n = p.size();
  std::vector<double> x(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double psi = p[i];
    x[static_cast<std::size_t>(i)] = psi * psi * psi - psi;
  }
  const PeriodicStencil d1(1, n, prm.l_period);
  std::vector<double> res = d1.apply(x);
  for (int i = 0; i < n; ++i) {
    auto& r = res[static_cast<std::size_t>(i)];
    r = prm.d_mob * r + prm.v * (p[i] - prm.mean_psi) + prm.f0 * std::sin(prm.k_wave * p.eta(i));
  }
  return res;
}

double residual_reduced(const Profile& p) { return max_abs(reduced_residual_vector(p)); }

}  // namespace chwave
