#pragma once

#include <numbers>
#include <string>
#include <vector>

namespace chwave {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline const double kInvSqrt3 = 1.0 / std::numbers::sqrt3;

/// Dimensionless parameters of the forced travelling-wave problem.
///
/// `l_period` and `k_wave` are tied by L k = 2 pi; use `with_period` to change
/// them together. The defaults are D = 1, k = 2 pi, L = 1.
struct ProblemParams {
  double mean_psi = 0.0;
  double f0 = 0.0;
  double v = 1.0;
  double d_mob = 1.0;
  double k_wave = kTwoPi;
  double l_period = 1.0;
  double eps = 0.0;

  /// Throws std::invalid_argument if an invariant is violated.
  void validate() const;

  ProblemParams with_period(double period) const;
  ProblemParams with_mean(double mean) const;

  bool operator==(const ProblemParams&) const = default;
};

ProblemParams make_params(double mean_psi, double f0, double v, double eps = 0.0);

/// Uniform periodic grid eta_i = i L / n, i = 0..n-1. The right endpoint is
/// never included. Requires even n >= 4.
std::vector<double> make_grid(const ProblemParams& params, int n);

enum class CaseKind { Case0, Case1, Case2, NoCase };

std::string to_string(CaseKind kind);

/// Which of the sufficient regularity conditions holds for (mean, f0/v).
struct CaseLabel {
  CaseKind kind = CaseKind::NoCase;
  bool unique_case0 = false;
  bool unique_case2 = false;
  std::string diagnostic;
};

/// Boundary equalities are NoCase: every inequality is strict.
CaseLabel classify_case(const ProblemParams& params);

}  // namespace chwave
