#include "chwave/stability.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>

#include "chwave/derivatives.hpp"
#include "chwave/error.hpp"

namespace chwave {

std::string to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::Stable: return "stable";
    case Verdict::Unstable: return "unstable";
    case Verdict::Marginal: return "marginal";
  }
  return "marginal";
}

namespace {

Eigen::MatrixXd derivative_matrix(int order, int n, double period, DerivativeScheme scheme) {
  if (scheme == DerivativeScheme::Spectral) return spectral_derivative_matrix(order, n, period);
  return PeriodicStencil(order, n, period).dense();
}

// Stencil acting on exp(i theta eta) p, conjugated back onto p: weight w_o
// picks up the phase exp(i theta o h).
Eigen::MatrixXcd bloch_stencil(int order, int n, double period, double theta) {
  const PeriodicStencil stencil(order, n, period);
  const auto w = stencil.weights();
  const int r = stencil.radius();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int o = -r; o <= r; ++o) {
      const int col = ((i + o) % n + n) % n;
      m(i, col) += w[static_cast<std::size_t>(o + r)] * std::polar(1.0, theta * o * stencil.spacing());
    }
  }
  return m;
}

Eigen::VectorXd mobility_factor(const Profile& base) {
  Eigen::VectorXd s(base.size());
  for (int i = 0; i < base.size(); ++i) s(i) = 3.0 * base[i] * base[i] - 1.0;
  return s;
}

Verdict verdict_for(double max_re, double tol) {
  if (max_re < -tol) return Verdict::Stable;
  if (max_re > tol) return Verdict::Unstable;
  return Verdict::Marginal;
}

// Restriction of A to mean-zero vectors. A maps into the mean-zero subspace
// (every term is a derivative), so with the Householder reflector H that
// sends 1/sqrt(N) to e_N, H A H has a zero last row and its leading block is
// the restricted operator.
Eigen::MatrixXd deflate_mean_mode(const Eigen::MatrixXd& a) {
  const Eigen::Index n = a.rows();
  Eigen::VectorXd w = Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
  w(n - 1) -= 1.0;
  w /= w.norm();
  const Eigen::VectorXd aw = a * w;
  const Eigen::RowVectorXd wa = w.transpose() * a;
  const double waw = w.dot(aw);
  Eigen::MatrixXd hah = a;
  hah.noalias() -= 2.0 * w * wa;
  hah.noalias() -= 2.0 * aw * w.transpose();
  hah.noalias() += (4.0 * waw) * (w * w.transpose());
  return hah.topLeftCorner(n - 1, n - 1);
}

std::vector<std::complex<double>> sorted_eigenvalues(const Eigen::VectorXcd& values) {
  std::vector<std::complex<double>> out(values.data(), values.data() + values.size());
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
    if (x.real() != y.real()) return x.real() > y.real();
    return x.imag() > y.imag();
  });
  return out;
}

std::vector<std::complex<double>> spectrum_of(const Profile& base, double eps, const StabilityOptions& opts) {
  if (opts.bloch_theta != 0.0) {
    const Eigen::MatrixXcd a = assemble_linearized_bloch(base, eps, opts.bloch_theta, opts.scheme);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(a, false);
    if (solver.info() != Eigen::Success) {
      throw SolverError(ErrorCode::SpectrumFailure, "complex eigensolver did not converge");
    }
    return sorted_eigenvalues(solver.eigenvalues());
  }
  Eigen::MatrixXd a = assemble_linearized(base, eps, opts.scheme);
  if (opts.project_mean_zero) a = deflate_mean_mode(a);
  Eigen::EigenSolver<Eigen::MatrixXd> solver(a, false);
  if (solver.info() != Eigen::Success) {
    throw SolverError(ErrorCode::SpectrumFailure, "real eigensolver did not converge");
  }
  return sorted_eigenvalues(solver.eigenvalues());
}

}  // namespace

Eigen::MatrixXd assemble_linearized(const Profile& base, double eps, DerivativeScheme scheme) {
  const ProblemParams& prm = base.params();
  const int n = base.size();
  const double period = prm.l_period;
  const Eigen::VectorXd s = mobility_factor(base);

  Eigen::MatrixXd a = derivative_matrix(2, n, period, scheme) * s.asDiagonal();
  a *= prm.d_mob;
  a += prm.v * derivative_matrix(1, n, period, scheme);
  if (eps != 0.0) a -= (eps * prm.d_mob) * derivative_matrix(4, n, period, scheme);
  return a;
}

Eigen::MatrixXcd assemble_linearized_bloch(const Profile& base, double eps, double theta,
                                           DerivativeScheme scheme) {
  const ProblemParams& prm = base.params();
  const int n = base.size();
  const double period = prm.l_period;
  const Eigen::VectorXd s = mobility_factor(base);

  Eigen::MatrixXcd d1, d2, d4;
  if (scheme == DerivativeScheme::Spectral) {
    d1 = spectral_derivative_matrix(1, n, period, theta);
    d2 = spectral_derivative_matrix(2, n, period, theta);
    d4 = spectral_derivative_matrix(4, n, period, theta);
  } else {
    d1 = bloch_stencil(1, n, period, theta);
    d2 = bloch_stencil(2, n, period, theta);
    d4 = bloch_stencil(4, n, period, theta);
  }
  Eigen::MatrixXcd a = d2 * s.cast<std::complex<double>>().asDiagonal();
  a *= prm.d_mob;
  a += prm.v * d1;
  if (eps != 0.0) a -= (eps * prm.d_mob) * d4;
  return a;
}

AnalyticBounds analytic_bounds(const Profile& base) {
  AnalyticBounds b;
  b.case_label = classify_case(base.params());
  const int n = base.size();
  std::vector<double> s(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) s[static_cast<std::size_t>(i)] = 3.0 * base[i] * base[i] - 1.0;
  const std::vector<double> sdd = PeriodicStencil(2, n, base.params().l_period).apply(s);

  b.s_min = *std::min_element(s.begin(), s.end());
  b.s_abs_min = std::numeric_limits<double>::infinity();
  for (double x : s) b.s_abs_min = std::min(b.s_abs_min, std::abs(x));
  b.s_ddot_max = max_abs(sdd);

  const double q1 = kTwoPi / base.params().l_period;
  const CaseKind kind = b.case_label.kind;
  b.stable_bound = (kind == CaseKind::Case0 || kind == CaseKind::Case2) && b.s_min > 0.0 &&
                   b.s_min * q1 * q1 >= 0.5 * b.s_ddot_max;
  b.unstable_bound = kind == CaseKind::Case1 && b.s_abs_min * q1 * q1 >= 0.5 * b.s_ddot_max;
  return b;
}

StabilityReport compute_spectrum(const Profile& base, double eps, const StabilityOptions& opts) {
  StabilityReport report{base, eps, {}, 0.0, Verdict::Marginal, {}};
  report.spectrum = spectrum_of(base, eps, opts);
  report.max_re = report.spectrum.empty() ? 0.0 : report.spectrum.front().real();
  report.verdict = verdict_for(report.max_re, opts.tol_marginal);
  report.bounds = analytic_bounds(base);
  return report;
}

double max_growth_rate(const Profile& base, double eps, const StabilityOptions& opts) {
  const auto spectrum = spectrum_of(base, eps, opts);
  return spectrum.empty() ? 0.0 : spectrum.front().real();
}

std::complex<double> dispersion_relation(const ProblemParams& params, double c0, double eps, double q) {
  const double d = params.d_mob;
  return {-d * (3.0 * c0 * c0 - 1.0) * q * q - eps * d * q * q * q * q, params.v * q};
}

}  // namespace chwave
