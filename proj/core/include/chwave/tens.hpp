#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "chwave/params.hpp"
#include "chwave/profile.hpp"
#include "chwave/spectral.hpp"

namespace chwave {

struct TensConfig {
  int n_modes = 256;
  double dt = 1e-4;
  double t_final = 10.0;
  std::uint64_t seed = 0;
  double init_amplitude = 0.1;
  double steady_tol = 1e-6;      ///< max-norm change per unit time
  double steady_window = 1.0;    ///< trailing window the rate must stay below tol
  double sample_interval = 0.05; ///< spacing of history samples
  double snapshot_interval = 0.0;  ///< 0 disables space-time snapshots
  bool stop_when_steady = true;

  void validate() const;

  bool operator==(const TensConfig&) const = default;
};

struct TensSample {
  double time = 0.0;
  double change_rate = 0.0;  ///< max|C(t) - C(t - sample)| / sample
};

struct TensSnapshot {
  double time = 0.0;
  std::vector<double> values;
};

struct TensResult {
  Profile final;
  double time = 0.0;
  std::vector<TensSample> history;
  std::vector<TensSnapshot> snapshots;
  bool steady = false;
  double steady_time = 0.0;
  double mean_drift = 0.0;     ///< |a_0(t) - a_0(0)|
  double max_imag = 0.0;       ///< largest imaginary residue seen after inverse transforms
  std::uint64_t seed = 0;
  long long steps = 0;
};

/// Semi-implicit backward-Euler pseudospectral integrator in the co-moving
/// frame. The stiff linear terms (eps D q^4 and the advection i v q) are
/// implicit; C^3 - C is explicit:
///   a_j <- [a_j - dt D q_j^2 Q_j + dt f0 k / 2 (delta_{j,1} + delta_{j,-1})]
///          / [1 + eps D dt q_j^4 - i v q_j dt].
class TensStepper {
 public:
  TensStepper(const ProblemParams& params, int n, double dt);

  int size() const noexcept { return n_; }
  double dt() const noexcept { return dt_; }

  /// Advances `coeffs` in place by one step. Returns the imaginary residue of
  /// the inverse transform used for the nonlinear term. Throws
  /// SolverError(BlowUp) on a non-finite coefficient.
  double advance(std::vector<Complex>& coeffs, double time);

  /// Real field of the current coefficients.
  double to_field(const std::vector<Complex>& coeffs, std::vector<double>& field);

 private:
  ProblemParams params_;
  int n_;
  double dt_;
  Fft fft_;
  std::vector<double> diffusion_;     // dt D q_j^2
  std::vector<Complex> denominator_;  // 1 + eps D dt q^4 - i v q dt
  std::vector<Complex> source_;       // dt f0 k / 2 at j = +-1
  std::vector<Complex> field_;
  std::vector<Complex> nonlinear_;
};

/// One step of the scheme (allocates a workspace; use TensStepper in loops).
SpectralState step(const SpectralState& state, const TensConfig& cfg);

/// <psi> + r_i, r_i uniform in [-a, a], shifted so the sample mean is <psi>.
Profile random_initial(const ProblemParams& params, const TensConfig& cfg);

/// Runs to t_final (or to steady state when stop_when_steady). Starts from
/// `initial` when given, otherwise from `random_initial`. Requires eps > 0.
TensResult run(const ProblemParams& params, const TensConfig& cfg,
               const std::optional<Profile>& initial = std::nullopt);

}  // namespace chwave
