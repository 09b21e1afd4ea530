#pragma once

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chwave/derivatives.hpp"
#include "chwave/params.hpp"
#include "chwave/profile.hpp"

namespace chwave {

enum class Model { Reduced, Full };

std::string to_string(Model model);

enum class GuessKind { A2, A1, A3, NSpike, Custom };

/// Label of the initial guess a wave was computed from. `spikes` is the spike
/// count for NSpike and 1 for A1/A3.
struct GuessLabel {
  GuessKind kind = GuessKind::Custom;
  int spikes = 0;
  int sign = +1;

  bool operator==(const GuessLabel&) const = default;
};

/// "a2", "a1", "a3", "nspike:<n>" (sign -1 as "nspike:-<n>"), "custom".
std::string to_string(const GuessLabel& label);
GuessLabel parse_guess_label(const std::string& text);

struct NewtonConfig {
  double tol_residual = 1e-12;  ///< stop when f = F.F / 2 drops below this
  int max_outer = 200;
  double c_armijo = 1e-4;
  double rho_backtrack = 0.5;
  double min_alpha = 1e-10;

  /// Throws std::invalid_argument unless 0 < c, rho < 1 and min_alpha > 0.
  void validate() const;

  bool operator==(const NewtonConfig&) const = default;
};

/// Discretised travelling-wave equation on N periodic points:
///   F(psi) = D Dx(psi^3 - psi) + v (psi - <psi>) + f0 sin(k eta) [- eps D Dxxx psi]
/// with fourth-order periodic stencils. The bracketed term is the full model.
class WaveSystem {
 public:
  WaveSystem(const ProblemParams& params, Model model, int n);

  int size() const noexcept { return n_; }
  Model model() const noexcept { return model_; }
  const ProblemParams& params() const noexcept { return params_; }

  void residual(std::span<const double> psi, std::span<double> out) const;
  std::vector<double> residual(std::span<const double> psi) const;

  /// J = D Dx diag(3 psi^2 - 1) + v I [- eps D Dxxx].
  Eigen::MatrixXd jacobian(std::span<const double> psi) const;

 private:
  ProblemParams params_;
  Model model_;
  int n_;
  PeriodicStencil d1_;
  PeriodicStencil d3_;
  std::vector<double> forcing_;
};

std::vector<double> build_residual(std::span<const double> psi, const ProblemParams& params, Model model);
Eigen::MatrixXd build_jacobian(std::span<const double> psi, const ProblemParams& params, Model model);

struct TravellingWave {
  Profile profile;
  Model model = Model::Reduced;
  GuessLabel guess;
  int iterations = 0;
  double final_residual = 0.0;  ///< f = F.F / 2 at the returned iterate
  double max_residual = 0.0;    ///< ||F||_inf at the returned iterate
  std::vector<double> merit_history;  ///< f before each outer step, then the final value
  std::vector<double> step_lengths;   ///< accepted alpha per outer step
};

/// Newton iteration with backtracking line search on the merit f = F.F / 2.
/// Throws SolverError with JacobianSingular, LineSearchStalled or NoConvergence.
TravellingWave newton_linesearch(std::span<const double> guess, const ProblemParams& params, Model model,
                                 const NewtonConfig& cfg = {}, GuessLabel label = {});

// Initial guesses ---------------------------------------------------------

/// <psi> + f0 phi_1(eta), clipped to [-1.5, 1.5] and re-centred on <psi>.
/// Degenerate means (3<psi>^2 = 1) use the kappa -> infinity limit
/// <psi> - f0 sin(k eta).
std::vector<double> guess_a2(const ProblemParams& params, int n);

struct SpikeGuess {
  std::vector<double> values;
  bool degenerate = false;  ///< spike edges closer than 4 sqrt(2 eps)
  double mean_shift = 0.0;  ///< constant added to hit <psi> exactly
};

/// Patchwork of tanh fronts: the single spike s tanh((eta-c1)/w) tanh((eta-c2)/w),
/// w = sqrt(2 eps), c1 = offset L (default L/4), c2 = c1 + (L - s<psi>)/2,
/// replicated n times across the period (compressed by 1/n), periodically
/// wrapped and shifted to the exact mean.
SpikeGuess guess_spike(const ProblemParams& params, int n, int n_spikes, int sign, double offset = 0.25);

/// Guess for a label: A2, A1 (s=+1), A3 (s=-1) or NSpike. For <psi> < 0 the
/// spike guesses are the mirror psi -> -psi(eta + L/2) of the guess at -<psi>.
std::vector<double> make_guess(const ProblemParams& params, int n, const GuessLabel& label);

/// Newton from the labelled guess. When a spike guess fails to converge the
/// solve is retried with the first front moved by L/16 steps (alternating
/// sides of L/4), up to `phase_trials` placements in total. The error of the
/// first attempt is rethrown if none converges.
TravellingWave solve_wave(const ProblemParams& params, int n, const GuessLabel& label, Model model = Model::Full,
                          const NewtonConfig& cfg = {}, int phase_trials = 16);

/// Number of sign changes of psi around the period divided by two.
int count_spikes(std::span<const double> psi);

}  // namespace chwave
