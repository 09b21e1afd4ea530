#include "chwave/params.hpp"

#include <cmath>
#include <stdexcept>

#include "chwave/error.hpp"

namespace chwave {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DegenerateMean: return "DegenerateMean";
    case ErrorCode::SingularTrajectory: return "SingularTrajectory";
    case ErrorCode::IntegrationFailure: return "IntegrationFailure";
    case ErrorCode::NoPeriodicSolution: return "NoPeriodicSolution";
    case ErrorCode::SingularOnly: return "SingularOnly";
    case ErrorCode::JacobianSingular: return "JacobianSingular";
    case ErrorCode::LineSearchStalled: return "LineSearchStalled";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::SpectrumFailure: return "SpectrumFailure";
    case ErrorCode::BlowUp: return "BlowUp";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

void ProblemParams::validate() const {
  if (!std::isfinite(mean_psi) || !std::isfinite(f0) || !std::isfinite(v) ||
      !std::isfinite(eps)) {
    throw std::invalid_argument("ProblemParams: non-finite parameter");
  }
  if (!(d_mob > 0.0)) throw std::invalid_argument("ProblemParams: d_mob must be > 0");
  if (eps < 0.0) throw std::invalid_argument("ProblemParams: eps must be >= 0");
  if (f0 < 0.0) throw std::invalid_argument("ProblemParams: f0 must be >= 0");
  if (!(l_period > 0.0)) throw std::invalid_argument("ProblemParams: l_period must be > 0");
  if (std::abs(l_period * k_wave - kTwoPi) > 1e-12 * kTwoPi) {
    throw std::invalid_argument("ProblemParams: l_period * k_wave must equal 2 pi");
  }
}

ProblemParams ProblemParams::with_period(double period) const {
  ProblemParams p = *this;
  p.l_period = period;
  p.k_wave = kTwoPi / period;
  return p;
}

ProblemParams ProblemParams::with_mean(double mean) const {
  ProblemParams p = *this;
  p.mean_psi = mean;
  return p;
}

ProblemParams make_params(double mean_psi, double f0, double v, double eps) {
  ProblemParams p;
  p.mean_psi = mean_psi;
  p.f0 = f0;
  p.v = v;
  p.eps = eps;
  p.validate();
  return p;
}

std::vector<double> make_grid(const ProblemParams& params, int n) {
  if (n < 4 || n % 2 != 0) {
    throw std::invalid_argument("make_grid: n must be even and >= 4");
  }
  const double h = params.l_period / n;
  std::vector<double> eta(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) eta[static_cast<std::size_t>(i)] = i * h;
  return eta;
}

std::string to_string(CaseKind kind) {
  switch (kind) {
    case CaseKind::Case0: return "Case0";
    case CaseKind::Case1: return "Case1";
    case CaseKind::Case2: return "Case2";
    case CaseKind::NoCase: return "NoCase";
  }
  return "NoCase";
}

CaseLabel classify_case(const ProblemParams& params) {
  CaseLabel label;
  if (params.v == 0.0) {
    label.diagnostic = "v = 0: cases are defined through f0/v";
    return label;
  }
  const double m = params.mean_psi;
  const double r = std::abs(params.f0 / params.v);
  const double c = kInvSqrt3;

  if (m - r > c) {
    label.kind = CaseKind::Case0;
  } else if (m - r > -c && m + r < c) {
    label.kind = CaseKind::Case1;
  } else if (m + r < -c) {
    label.kind = CaseKind::Case2;
  }

  const double threshold = r + std::sqrt(4.0 * r * r + 1.0 / 3.0);
  label.unique_case0 = label.kind == CaseKind::Case0 && m > threshold;
  label.unique_case2 = label.kind == CaseKind::Case2 && m < -threshold;
  return label;
}

}  // namespace chwave
