#include "chwave/profile.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace chwave {

Profile::Profile(ProblemParams params, std::vector<double> values, double mean_tol)
    : params_(params), values_(std::move(values)), mean_tol_(mean_tol) {
  if (values_.size() < 8 || values_.size() % 2 != 0) {
    throw std::invalid_argument("Profile: N must be even and >= 8");
  }
}

double Profile::mean() const noexcept { return mean_of(values_); }

double Profile::min() const noexcept { return *std::min_element(values_.begin(), values_.end()); }

double Profile::max() const noexcept { return *std::max_element(values_.begin(), values_.end()); }

bool Profile::mean_consistent() const noexcept {
  return std::abs(mean() - params_.mean_psi) <= mean_tol_;
}

std::vector<double> circular_shift(std::span<const double> in, int shift) {
  const int n = static_cast<int>(in.size());
  std::vector<double> out(in.size());
  for (int i = 0; i < n; ++i) {
    const int src = ((i + shift) % n + n) % n;
    out[static_cast<std::size_t>(i)] = in[static_cast<std::size_t>(src)];
  }
  return out;
}

Profile mirror_profile(const Profile& p) {
  if (p.size() % 2 != 0) {
    throw std::invalid_argument("mirror_profile: N must be even for a half-period shift");
  }
  std::vector<double> out = circular_shift(p.values(), p.size() / 2);
  for (double& x : out) x = -x;
  return Profile(p.params().with_mean(-p.params().mean_psi), std::move(out), p.mean_tol());
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("max_abs_diff: size mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double max_abs(std::span<const double> a) {
  double m = 0.0;
  for (double x : a) m = std::max(m, std::abs(x));
  return m;
}

double mean_of(std::span<const double> a) {
  if (a.empty()) return 0.0;
  return std::accumulate(a.begin(), a.end(), 0.0) / static_cast<double>(a.size());
}

}  // namespace chwave
