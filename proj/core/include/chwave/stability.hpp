#pragma once

#include <Eigen/Dense>

#include <complex>
#include <string>
#include <vector>

#include "chwave/newton.hpp"
#include "chwave/params.hpp"
#include "chwave/profile.hpp"

namespace chwave {

enum class Verdict { Stable, Unstable, Marginal };

std::string to_string(Verdict verdict);

/// How the derivatives in the linearised operator are discretised.
enum class DerivativeScheme { Spectral, FiniteDifference };

struct StabilityOptions {
  DerivativeScheme scheme = DerivativeScheme::Spectral;
  bool project_mean_zero = true;
  double bloch_theta = 0.0;   ///< in [0, 2 pi / L); 0 gives L-periodic perturbations
  double tol_marginal = 1e-6;
};

/// Perturbation growth operator about a travelling wave psi:
///   A dC = v dC' + D (S dC)'' - eps D dC'''',   S = 3 psi^2 - 1.
/// eps = 0 gives the reduced-order operator.
Eigen::MatrixXd assemble_linearized(const Profile& base, double eps,
                                    DerivativeScheme scheme = DerivativeScheme::Spectral);

/// Same operator acting on the periodic factor p of exp(i theta eta) p(eta).
Eigen::MatrixXcd assemble_linearized_bloch(const Profile& base, double eps, double theta,
                                           DerivativeScheme scheme = DerivativeScheme::Spectral);

/// Sufficient conditions for stability (Cases 0 and 2) and instability
/// (Case 1) of a reduced-order wave, evaluated from S = 3 psi^2 - 1.
struct AnalyticBounds {
  CaseLabel case_label;
  double s_min = 0.0;
  double s_abs_min = 0.0;
  double s_ddot_max = 0.0;
  bool stable_bound = false;
  bool unstable_bound = false;
};

AnalyticBounds analytic_bounds(const Profile& base);

struct StabilityReport {
  Profile base;
  double eps = 0.0;
  std::vector<std::complex<double>> spectrum;  ///< sorted by descending real part
  double max_re = 0.0;
  Verdict verdict = Verdict::Marginal;
  AnalyticBounds bounds;
};

/// Eigenvalues of the linearised operator. With `project_mean_zero` (and
/// theta = 0) the constant mode is deflated by an orthogonal change of basis
/// that maps 1/sqrt(N) onto the last coordinate, and the spectrum of the
/// restriction to mean-zero vectors is returned. Throws
/// SolverError(SpectrumFailure) if the eigensolver does not converge.
StabilityReport compute_spectrum(const Profile& base, double eps, const StabilityOptions& opts = {});

inline StabilityReport compute_spectrum(const TravellingWave& wave, double eps,
                                        const StabilityOptions& opts = {}) {
  return compute_spectrum(wave.profile, eps, opts);
}

/// Largest real part only (same operator and projection as compute_spectrum).
double max_growth_rate(const Profile& base, double eps, const StabilityOptions& opts = {});

/// lambda_j = -D (3 c0^2 - 1) q^2 - eps D q^4 + i v q for a uniform base c0.
std::complex<double> dispersion_relation(const ProblemParams& params, double c0, double eps, double q);

}  // namespace chwave
