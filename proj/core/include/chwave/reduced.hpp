#pragma once

#include <optional>
#include <vector>

#include "chwave/params.hpp"
#include "chwave/profile.hpp"

namespace chwave {

/// Half-width of the band of X = psi^3 - psi over which all three real
/// roots exist: 2 / (3 sqrt 3).
inline const double kFoldX = 2.0 / (3.0 * std::numbers::sqrt3);

/// Branch j of the inverse of X = psi^3 - psi:
///   j = 0: psi >= 1/sqrt3,  j = 1: |psi| <= 1/sqrt3,  j = 2: psi <= -1/sqrt3.
struct BranchIndex {
  int j = 0;
  bool operator==(const BranchIndex&) const = default;
};

/// Real value of branch j at X. The outer branches continue past the far
/// fold through the hyperbolic form of the cubic formula; a branch is only
/// complex beyond its own fold(s). Returns nullopt there, after clamping
/// drift of up to `clamp_tol`.
std::optional<double> branch_value(BranchIndex branch, double x, double clamp_tol = 1e-12);

/// True if the fold of `branch` is not crossed at X.
bool branch_real(BranchIndex branch, double x, double clamp_tol = 1e-12);

/// Branch hosting psi (psi exactly at +-1/sqrt3 is assigned to the outer branch).
BranchIndex branch_of(double psi);

enum class TrajectoryStatus { Ok, Singular, IntegrationFailure };

struct Trajectory {
  TrajectoryStatus status = TrajectoryStatus::Ok;
  /// X at eta_i = i L / n for i = 0..n (the last entry is X(L)).
  std::vector<double> x;
  /// Where the trajectory crossed the branch fold (Singular only).
  double exit_eta = 0.0;
};

struct ShootingConfig {
  int n_points = 512;
  double rk_tol = 1e-10;
  int bracket_samples = 64;
  double root_tol = 1e-10;
  double near_singular_tol = 1e-6;

  bool operator==(const ShootingConfig&) const = default;
};

/// Integrates D dX/deta = -v (psi_j(X) - <psi>) - f0 sin(k eta) on [0, L]
/// with an adaptive embedded Runge-Kutta 7(8) pair, sampling X on the grid.
Trajectory integrate_dX(const ProblemParams& params, BranchIndex branch, double x0,
                        int n_points = 512, double rk_tol = 1e-10);

struct ReducedSolution {
  Profile profile;
  BranchIndex branch;
  double shoot_root = 0.0;   ///< psi(0) = psi(L)
  double shoot_residual = 0.0;  ///< |X(L) - X(0)| at the converged root
  bool regular = false;
  bool near_singular = false;
  double min_abs_s = 0.0;    ///< min |3 psi^2 - 1|
};

/// All periodic solutions on one branch, found by sampling
/// g(a) = X(L; a) - X(a) across [<psi> - f0/v, <psi> + f0/v] and refining
/// every sign change. Throws SolverError(NoPeriodicSolution) if no sign change
/// exists, or SolverError(SingularOnly) if every candidate shoot was singular.
std::vector<ReducedSolution> shoot_periodic_all(const ProblemParams& params, BranchIndex branch,
                                                const ShootingConfig& cfg = {});

/// First root of `shoot_periodic_all`.
ReducedSolution shoot_periodic(const ProblemParams& params, BranchIndex branch,
                               const ShootingConfig& cfg = {});

/// Outcome of trying every branch at one parameter point.
struct ReducedScanPoint {
  std::vector<ReducedSolution> solutions;  ///< regular periodic solutions, all branches
  bool any_singular_only = false;
};

ReducedScanPoint solve_reduced_all_branches(const ProblemParams& params,
                                            const ShootingConfig& cfg = {});

/// The unique regular solution if exactly one branch yields one; otherwise
/// the first. Throws SolverError(SingularOnly / NoPeriodicSolution) if none.
ReducedSolution solve_reduced(const ProblemParams& params, const ShootingConfig& cfg = {});

/// kappa^2/(k^2 + kappa^2) [(k/kappa) cos(k eta) - sin(k eta)],
/// kappa = (v/D)/(3<psi>^2 - 1). Throws SolverError(DegenerateMean) when
/// |3<psi>^2 - 1| < 1e-8.
std::vector<double> small_f0_correction(const ProblemParams& params, int n);

/// <psi> + f0 phi_1(eta).
Profile asymptotic_small_f0(const ProblemParams& params, int n);

/// Pointwise residual D d(psi^3 - psi)/deta + v (psi - <psi>) + f0 sin(k eta)
/// using the fourth-order periodic first-derivative stencil.
std::vector<double> reduced_residual_vector(const Profile& p);

/// Max-norm of `reduced_residual_vector`.
double residual_reduced(const Profile& p);

}  // namespace chwave
