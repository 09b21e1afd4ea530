#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "chwave/error.hpp"
#include "chwave/newton.hpp"
#include "chwave/reduced.hpp"

namespace chwave {

namespace {

void recentre(std::vector<double>& values, double mean) {
  const double shift = mean - mean_of(values);
  for (double& x : values) x += shift;
}

// Smooth indicator of [start, start + length) on the circle of circumference
// `period`, with tanh edges of width w.
double periodic_box(double eta, double start, double length, double w, double period) {
  double acc = 0.0;
  for (int image = -1; image <= 1; ++image) {
    const double x = eta + image * period;
    acc += 0.5 * (std::tanh((x - start) / w) - std::tanh((x - start - length) / w));
  }
  return acc;
}

// Spike guesses below zero mean are mirror images of the construction at
// -<psi>, so A1 at -<psi> is the mirror of A1 at <psi>.
std::vector<double> spike_values(const ProblemParams& params, int n, int n_spikes, int sign, double offset) {
  if (params.mean_psi >= 0.0) return guess_spike(params, n, n_spikes, sign, offset).values;
  const std::vector<double> up = guess_spike(params.with_mean(-params.mean_psi), n, n_spikes, sign, offset).values;
  std::vector<double> out(up.size());
  for (std::size_t i = 0; i < up.size(); ++i) out[i] = -up[(i + up.size() / 2) % up.size()];
  return out;
}

}  // namespace

std::vector<double> guess_a2(const ProblemParams& params, int n) {
  std::vector<double> phi;
  try {
    phi = small_f0_correction(params, n);
  } catch (const SolverError&) {
    const std::vector<double> eta = make_grid(params, n);
    phi.resize(eta.size());
    for (std::size_t i = 0; i < eta.size(); ++i) phi[i] = -std::sin(params.k_wave * eta[i]);
  }
  std::vector<double> guess(phi.size());
  for (std::size_t i = 0; i < phi.size(); ++i) {
    guess[i] = std::clamp(params.mean_psi + params.f0 * phi[i], -1.5, 1.5);
  }
  recentre(guess, params.mean_psi);
  return guess;
}

SpikeGuess guess_spike(const ProblemParams& params, int n, int n_spikes, int sign, double offset) {
  if (!(params.eps > 0.0)) throw std::invalid_argument("guess_spike: eps must be > 0");
  if (n_spikes < 1) throw std::invalid_argument("guess_spike: n_spikes must be >= 1");
  if (sign != 1 && sign != -1) throw std::invalid_argument("guess_spike: sign must be +1 or -1");

  const double period = params.l_period;
  const double w = std::sqrt(2.0 * params.eps);
  const double c1 = offset * period;
  // Length of the -s segment so that s (1 - 2 length / L) = <psi>.
  const double length = 0.5 * period * (1.0 - sign * params.mean_psi);
  const double box = std::max(length, 0.0) / n_spikes;
  const double gap = period / n_spikes - box;

  SpikeGuess out;
  out.degenerate = box < 4.0 * w || gap < 4.0 * w;
  const std::vector<double> eta = make_grid(params, n);
  out.values.resize(eta.size());
  for (std::size_t i = 0; i < eta.size(); ++i) {
    double inside = 0.0;
    for (int j = 0; j < n_spikes; ++j) {
      const double start = (c1 + j * period) / n_spikes;
      inside += periodic_box(eta[i], start, box, w, period);
    }
    out.values[i] = sign * (1.0 - 2.0 * inside);
  }
  const double before = mean_of(out.values);
  recentre(out.values, params.mean_psi);
  out.mean_shift = params.mean_psi - before;
  return out;
}

std::vector<double> make_guess(const ProblemParams& params, int n, const GuessLabel& label) {
  switch (label.kind) {
    case GuessKind::A2: return guess_a2(params, n);
    case GuessKind::A1: return spike_values(params, n, 1, +1, 0.25);
    case GuessKind::A3: return spike_values(params, n, 1, -1, 0.25);
    case GuessKind::NSpike: return spike_values(params, n, label.spikes, label.sign, 0.25);
    case GuessKind::Custom: break;
  }
  throw std::invalid_argument("make_guess: custom guesses must be supplied by the caller");
}

TravellingWave solve_wave(const ProblemParams& params, int n, const GuessLabel& label, Model model,
                          const NewtonConfig& cfg, int phase_trials) {
  const bool spike = label.kind == GuessKind::A1 || label.kind == GuessKind::A3 || label.kind == GuessKind::NSpike;
  if (!spike) return newton_linesearch(make_guess(params, n, label), params, model, cfg, label);

  const int spikes = label.kind == GuessKind::NSpike ? label.spikes : 1;
  const int sign = label.kind == GuessKind::A3 ? -1 : label.kind == GuessKind::A1 ? +1 : label.sign;
  std::optional<SolverError> first;
  for (int t = 0; t < std::max(1, phase_trials); ++t) {
    // 0, +1, -1, +2, -2, ... sixteenths of the period away from L/4
    const int step = (t + 1) / 2 * (t % 2 == 1 ? 1 : -1);
    const double offset = 0.25 + step / 16.0;
    try {
      return newton_linesearch(spike_values(params, n, spikes, sign, offset), params, model, cfg, label);
    } catch (const SolverError& e) {
      if (!first) first = e;
    }
  }
  throw *first;
}

int count_spikes(std::span<const double> psi) {
  const std::size_t n = psi.size();
  int changes = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = psi[i];
    const double b = psi[(i + 1) % n];
    if ((a < 0.0) != (b < 0.0)) ++changes;
  }
  return changes / 2;
}

}  // namespace chwave
