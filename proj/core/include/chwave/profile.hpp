#pragma once

#include <span>
#include <vector>

#include "chwave/params.hpp"

namespace chwave {

/// A real concentration field sampled at eta_i = i L / N on [0, L).
class Profile {
 public:
  /// Requires values.size() >= 8 and even.
  Profile(ProblemParams params, std::vector<double> values, double mean_tol = 1e-8);

  const ProblemParams& params() const noexcept { return params_; }
  std::span<const double> values() const noexcept { return values_; }
  const std::vector<double>& vector() const noexcept { return values_; }
  int size() const noexcept { return static_cast<int>(values_.size()); }
  double operator[](int i) const { return values_[static_cast<std::size_t>(i)]; }

  double spacing() const noexcept { return params_.l_period / size(); }
  double eta(int i) const noexcept { return i * spacing(); }
  std::vector<double> grid() const { return make_grid(params_, size()); }

  double mean() const noexcept;
  double min() const noexcept;
  double max() const noexcept;
  double mean_tol() const noexcept { return mean_tol_; }

  /// |mean(values) - params.mean_psi| <= mean_tol.
  bool mean_consistent() const noexcept;

 private:
  ProblemParams params_;
  std::vector<double> values_;
  double mean_tol_;
};

/// psi_hat(eta) = -psi(eta + L/2), the solution at mean -<psi>.
/// Throws std::invalid_argument for odd N.
Profile mirror_profile(const Profile& p);

/// Circular shift by `shift` samples: out[i] = in[(i + shift) mod N].
std::vector<double> circular_shift(std::span<const double> in, int shift);

double max_abs_diff(std::span<const double> a, std::span<const double> b);
double max_abs(std::span<const double> a);
double mean_of(std::span<const double> a);

}  // namespace chwave
