#include "chwave/tens.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "chwave/error.hpp"

namespace chwave {

void TensConfig::validate() const {
  if (!(dt > 0.0)) throw std::invalid_argument("TensConfig: dt must be > 0");
  if (!(t_final > 0.0)) throw std::invalid_argument("TensConfig: t_final must be > 0");
  if (n_modes < 8 || n_modes % 2 != 0) throw std::invalid_argument("TensConfig: n_modes must be even and >= 8");
  if (init_amplitude < 0.0) throw std::invalid_argument("TensConfig: init_amplitude must be >= 0");
  if (!(sample_interval > 0.0)) throw std::invalid_argument("TensConfig: sample_interval must be > 0");
  if (steady_window < sample_interval) throw std::invalid_argument("TensConfig: steady_window < sample_interval");
}

TensStepper::TensStepper(const ProblemParams& params, int n, double dt)
    : params_(params),
      n_(n),
      dt_(dt),
      fft_(n),
      diffusion_(static_cast<std::size_t>(n)),
      denominator_(static_cast<std::size_t>(n)),
      source_(static_cast<std::size_t>(n), Complex(0.0)),
      field_(static_cast<std::size_t>(n)),
      nonlinear_(static_cast<std::size_t>(n)) {
  params_.validate();
  const double dq = kTwoPi / params_.l_period;
  const double d = params_.d_mob;
  for (int s = 0; s < n; ++s) {
    const int j = fft_index(s, n);
    const double q = dq * j;
    // The Nyquist mode has no partner, so the odd-order advection term is dropped there.
    const double q_odd = (s == n / 2) ? 0.0 : q;
    diffusion_[static_cast<std::size_t>(s)] = dt * d * q * q;
    denominator_[static_cast<std::size_t>(s)] =
        Complex(1.0 + params_.eps * d * dt * q * q * q * q, -params_.v * q_odd * dt);
  }
  // f0 k cos(k eta) has amplitude f0 k / 2 on j = +-1 when k = 2 pi / L.
  const double half = 0.5 * dt * params_.f0 * params_.k_wave;
  source_[1] = half;
  source_[static_cast<std::size_t>(n - 1)] = half;
}

double TensStepper::advance(std::vector<Complex>& coeffs, double time) {
  if (static_cast<int>(coeffs.size()) != n_) throw std::invalid_argument("TensStepper: size mismatch");
  fft_.inverse(coeffs, field_);
  double max_imag = 0.0;
  for (auto& c : field_) {
    max_imag = std::max(max_imag, std::abs(c.imag()));
    const double u = c.real();
    c = Complex(u * u * u - u, 0.0);
  }
  fft_.forward(std::span<const Complex>(field_), std::span<Complex>(nonlinear_));
  for (int s = 0; s < n_; ++s) {
    const auto i = static_cast<std::size_t>(s);
    coeffs[i] = (coeffs[i] - diffusion_[i] * nonlinear_[i] + source_[i]) / denominator_[i];
    if (!std::isfinite(coeffs[i].real()) || !std::isfinite(coeffs[i].imag())) {
      throw SolverError(ErrorCode::BlowUp, "non-finite Fourier amplitude at t = " + std::to_string(time));
    }
  }
  return max_imag;
}

double TensStepper::to_field(const std::vector<Complex>& coeffs, std::vector<double>& field) {
  field.resize(coeffs.size());
  return fft_.inverse(coeffs, std::span<double>(field));
}

SpectralState step(const SpectralState& state, const TensConfig& cfg) {
  TensStepper stepper(state.params, static_cast<int>(state.coeffs.size()), cfg.dt);
  SpectralState next = state;
  stepper.advance(next.coeffs, state.time);
  next.time = state.time + cfg.dt;
  return next;
}

Profile random_initial(const ProblemParams& params, const TensConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> dist(-cfg.init_amplitude, cfg.init_amplitude);
  std::vector<double> values(static_cast<std::size_t>(cfg.n_modes));
  for (double& x : values) x = dist(rng);
  const double shift = mean_of(values);
  for (double& x : values) x = params.mean_psi + (x - shift);
  return Profile(params, std::move(values));
}

TensResult run(const ProblemParams& params, const TensConfig& cfg, const std::optional<Profile>& initial) {
  cfg.validate();
  params.validate();
  if (!(params.eps > 0.0)) throw std::invalid_argument("tens::run: eps must be > 0");

  const Profile start = initial ? *initial : random_initial(params, cfg);
  if (start.size() != cfg.n_modes) throw std::invalid_argument("tens::run: initial profile size != n_modes");

  TensStepper stepper(params, cfg.n_modes, cfg.dt);
  Fft fft(cfg.n_modes);
  std::vector<Complex> coeffs = fft.forward(start.values());
  const Complex a0 = coeffs[0];

  TensResult result{start, 0.0, {}, {}, false, 0.0, 0.0, 0.0, 0, 0};
  result.seed = cfg.seed;

  const long long total_steps = static_cast<long long>(std::llround(cfg.t_final / cfg.dt));
  const long long sample_every = std::max(1LL, static_cast<long long>(std::llround(cfg.sample_interval / cfg.dt)));
  const long long snapshot_every =
      cfg.snapshot_interval > 0.0 ? std::max(1LL, static_cast<long long>(std::llround(cfg.snapshot_interval / cfg.dt)))
                                  : 0;
  const double sample_dt = sample_every * cfg.dt;
  const auto window_samples = static_cast<std::size_t>(std::ceil(cfg.steady_window / sample_dt - 1e-9));

  std::vector<double> previous(start.vector());
  std::vector<double> field;
  if (snapshot_every > 0) result.snapshots.push_back({0.0, previous});

  std::size_t below = 0;
  long long n = 0;
  for (; n < total_steps; ++n) {
    const double t = n * cfg.dt;
    result.max_imag = std::max(result.max_imag, stepper.advance(coeffs, t));
    const long long done = n + 1;
    const double t_next = done * cfg.dt;
    const bool sample = done % sample_every == 0;
    const bool snapshot = snapshot_every > 0 && done % snapshot_every == 0;
    if (!sample && !snapshot) continue;

    result.max_imag = std::max(result.max_imag, stepper.to_field(coeffs, field));
    if (snapshot) result.snapshots.push_back({t_next, field});
    if (sample) {
      const double rate = max_abs_diff(field, previous) / sample_dt;
      result.history.push_back({t_next, rate});
      previous = field;
      below = rate < cfg.steady_tol ? below + 1 : 0;
      if (below >= window_samples && !result.steady) {
        result.steady = true;
        result.steady_time = t_next;
        if (cfg.stop_when_steady) {
          ++n;
          break;
        }
      } else if (below < window_samples) {
        result.steady = false;
      }
    }
  }

  result.steps = n;
  result.time = n * cfg.dt;
  result.max_imag = std::max(result.max_imag, stepper.to_field(coeffs, field));
  result.final = Profile(params, field);
  result.mean_drift = std::abs(coeffs[0] - a0);
  return result;
}

}  // namespace chwave
