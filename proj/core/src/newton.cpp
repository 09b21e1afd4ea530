#include "chwave/newton.hpp"

#include <cmath>
#include <stdexcept>

#include "chwave/error.hpp"

namespace chwave {

std::string to_string(Model model) { return model == Model::Reduced ? "reduced" : "full"; }

std::string to_string(const GuessLabel& label) {
  switch (label.kind) {
    case GuessKind::A2: return "a2";
    case GuessKind::A1: return "a1";
    case GuessKind::A3: return "a3";
    case GuessKind::NSpike:
      return "nspike:" + std::string(label.sign < 0 ? "-" : "") + std::to_string(label.spikes);
    case GuessKind::Custom: return "custom";
  }
  return "custom";
}

GuessLabel parse_guess_label(const std::string& text) {
  if (text == "a2") return {GuessKind::A2, 0, +1};
  if (text == "a1") return {GuessKind::A1, 1, +1};
  if (text == "a3") return {GuessKind::A3, 1, -1};
  if (text == "custom") return {GuessKind::Custom, 0, +1};
  const std::string prefix = "nspike:";
  if (text.rfind(prefix, 0) == 0) {
    std::string count = text.substr(prefix.size());
    int sign = +1;
    if (!count.empty() && count.front() == '-') {
      sign = -1;
      count.erase(0, 1);
    }
    std::size_t used = 0;
    int n = 0;
    try {
      n = std::stoi(count, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == count.size() && n >= 1) return {GuessKind::NSpike, n, sign};
  }
  throw std::invalid_argument("unknown guess '" + text + "' (expected a2, a1, a3, nspike:<n>)");
}

void NewtonConfig::validate() const {
  if (!(c_armijo > 0.0 && c_armijo < 1.0)) throw std::invalid_argument("NewtonConfig: c_armijo must be in (0,1)");
  if (!(rho_backtrack > 0.0 && rho_backtrack < 1.0)) {
    throw std::invalid_argument("NewtonConfig: rho_backtrack must be in (0,1)");
  }
  if (!(min_alpha > 0.0)) throw std::invalid_argument("NewtonConfig: min_alpha must be > 0");
  if (!(tol_residual > 0.0)) throw std::invalid_argument("NewtonConfig: tol_residual must be > 0");
  if (max_outer < 0) throw std::invalid_argument("NewtonConfig: max_outer must be >= 0");
}

WaveSystem::WaveSystem(const ProblemParams& params, Model model, int n)
    : params_(params),
      model_(model),
      n_(n),
      d1_(1, n, params.l_period),
      d3_(3, n, params.l_period),
      forcing_(static_cast<std::size_t>(n)) {
  params_.validate();
  if (n < 8 || n % 2 != 0) throw std::invalid_argument("WaveSystem: N must be even and >= 8");
  const std::vector<double> eta = make_grid(params_, n);
  for (int i = 0; i < n; ++i) {
    forcing_[static_cast<std::size_t>(i)] = params_.f0 * std::sin(params_.k_wave * eta[static_cast<std::size_t>(i)]);
  }
}

void WaveSystem::residual(std::span<const double> psi, std::span<double> out) const {
  if (static_cast<int>(psi.size()) != n_ || static_cast<int>(out.size()) != n_) {
    throw std::invalid_argument("WaveSystem::residual: size mismatch");
  }
  std::vector<double> cubic(psi.size());
  for (std::size_t i = 0; i < psi.size(); ++i) cubic[i] = psi[i] * psi[i] * psi[i] - psi[i];
  d1_.apply(cubic, out);
  const double d = params_.d_mob;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    out[i] = d * out[i] + params_.v * (psi[i] - params_.mean_psi) + forcing_[i];
  }
  if (model_ == Model::Full && params_.eps != 0.0) {
    const std::vector<double> third = d3_.apply(psi);
    for (std::size_t i = 0; i < psi.size(); ++i) out[i] -= params_.eps * d * third[i];
  }
}

std::vector<double> WaveSystem::residual(std::span<const double> psi) const {
  std::vector<double> out(psi.size());
  residual(psi, out);
  return out;
}

Eigen::MatrixXd WaveSystem::jacobian(std::span<const double> psi) const {
  if (static_cast<int>(psi.size()) != n_) throw std::invalid_argument("WaveSystem::jacobian: size mismatch");
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n_, n_);
  const double d = params_.d_mob;
  const auto w1 = d1_.weights();
  const int r1 = d1_.radius();
  for (int i = 0; i < n_; ++i) {
    for (int o = -r1; o <= r1; ++o) {
      const int col = ((i + o) % n_ + n_) % n_;
      const double p = psi[static_cast<std::size_t>(col)];
      jac(i, col) += d * w1[static_cast<std::size_t>(o + r1)] * (3.0 * p * p - 1.0);
    }
    jac(i, i) += params_.v;
  }
  if (model_ == Model::Full && params_.eps != 0.0) {
    const auto w3 = d3_.weights();
    const int r3 = d3_.radius();
    for (int i = 0; i < n_; ++i) {
      for (int o = -r3; o <= r3; ++o) {
        const int col = ((i + o) % n_ + n_) % n_;
        jac(i, col) -= params_.eps * d * w3[static_cast<std::size_t>(o + r3)];
      }
    }
  }
  return jac;
}

std::vector<double> build_residual(std::span<const double> psi, const ProblemParams& params, Model model) {
  return WaveSystem(params, model, static_cast<int>(psi.size())).residual(psi);
}

Eigen::MatrixXd build_jacobian(std::span<const double> psi, const ProblemParams& params, Model model) {
  return WaveSystem(params, model, static_cast<int>(psi.size())).jacobian(psi);
}

namespace {

bool all_finite(std::span<const double> x) {
  for (double v : x) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

}  // namespace

TravellingWave newton_linesearch(std::span<const double> guess, const ProblemParams& params, Model model,
                                 const NewtonConfig& cfg, GuessLabel label) {
  cfg.validate();
  const int n = static_cast<int>(guess.size());
  if (!all_finite(guess)) throw std::invalid_argument("newton_linesearch: guess is not finite");
  if (model == Model::Full && params.eps > 0.0 && params.eps <= 5e-4 && n < 64) {
    throw std::invalid_argument("newton_linesearch: N >= 64 is required to resolve the interface");
  }
  const WaveSystem system(params, model, n);

  Eigen::VectorXd psi = Eigen::Map<const Eigen::VectorXd>(guess.data(), n);
  Eigen::VectorXd res(n);
  system.residual(std::span<const double>(psi.data(), static_cast<std::size_t>(n)),
                  std::span<double>(res.data(), static_cast<std::size_t>(n)));
  double f = 0.5 * res.squaredNorm();

  TravellingWave wave{Profile(params, std::vector<double>(guess.begin(), guess.end())), model, label, 0, 0.0, 0.0, {}, {}};
  Eigen::VectorXd trial(n);
  Eigen::VectorXd trial_res(n);
  int it = 0;
  for (; it < cfg.max_outer && !(f < cfg.tol_residual); ++it) {
    wave.merit_history.push_back(f);
    const Eigen::MatrixXd jac = system.jacobian(std::span<const double>(psi.data(), static_cast<std::size_t>(n)));
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(jac);
    const Eigen::VectorXd step = -lu.solve(res);
    if (!step.allFinite() || lu.rcond() < 1e-15) {
      throw SolverError(ErrorCode::JacobianSingular, "linear solve failed at iteration " + std::to_string(it));
    }
    // Directional derivative of f along the step: F . (J step) = -F.F.
    const double slope = res.dot(jac * step);
    double alpha = 1.0;
    double f_trial = 0.0;
    for (;;) {
      trial = psi + alpha * step;
      system.residual(std::span<const double>(trial.data(), static_cast<std::size_t>(n)),
                      std::span<double>(trial_res.data(), static_cast<std::size_t>(n)));
      f_trial = 0.5 * trial_res.squaredNorm();
      if (std::isfinite(f_trial) && f_trial <= f + cfg.c_armijo * alpha * slope) break;
      alpha *= cfg.rho_backtrack;
      if (alpha < cfg.min_alpha) {
        throw SolverError(ErrorCode::LineSearchStalled,
                          "step length fell below " + std::to_string(cfg.min_alpha) + " at iteration " +
                              std::to_string(it) + " (f = " + std::to_string(f) + ")");
      }
    }
    wave.step_lengths.push_back(alpha);
    psi.swap(trial);
    res.swap(trial_res);
    f = f_trial;
  }
  wave.merit_history.push_back(f);
  if (!(f < cfg.tol_residual)) {
    throw SolverError(ErrorCode::NoConvergence, "f = " + std::to_string(f) + " after " +
                                                    std::to_string(cfg.max_outer) + " iterations");
  }
  wave.profile = Profile(params, std::vector<double>(psi.data(), psi.data() + n));
  wave.iterations = it;
  wave.final_residual = f;
  wave.max_residual = res.cwiseAbs().maxCoeff();
  return wave;
}

}  // namespace chwave
