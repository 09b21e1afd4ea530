#include "chwave/derivatives.hpp"

#include <cmath>
#include <stdexcept>

#include "chwave/params.hpp"

namespace chwave {

namespace {

std::vector<double> stencil_weights(int order) {
  switch (order) {
    case 1: return {1.0 / 12.0, -2.0 / 3.0, 0.0, 2.0 / 3.0, -1.0 / 12.0};
    case 2: return {-1.0 / 12.0, 4.0 / 3.0, -5.0 / 2.0, 4.0 / 3.0, -1.0 / 12.0};
    case 3: return {1.0 / 8.0, -1.0, 13.0 / 8.0, 0.0, -13.0 / 8.0, 1.0, -1.0 / 8.0};
    case 4: return {-1.0 / 6.0, 2.0, -13.0 / 2.0, 28.0 / 3.0, -13.0 / 2.0, 2.0, -1.0 / 6.0};
    default: throw std::invalid_argument("PeriodicStencil: order must be 1..4");
  }
}

}  // namespace

PeriodicStencil::PeriodicStencil(int order, int n, double period)
    : order_(order), n_(n), h_(period / n), weights_(stencil_weights(order)) {
  if (n < 2 * radius() + 1) throw std::invalid_argument("PeriodicStencil: grid too small");
  const double scale = std::pow(h_, -order_);
  for (double& w : weights_) w *= scale;
}

void PeriodicStencil::apply(std::span<const double> in, std::span<double> out) const {
  if (static_cast<int>(in.size()) != n_ || static_cast<int>(out.size()) != n_) {
    throw std::invalid_argument("PeriodicStencil::apply: size mismatch");
  }
  const int r = radius();
  for (int i = 0; i < n_; ++i) {
    double acc = 0.0;
    for (int o = -r; o <= r; ++o) {
      int idx = i + o;
      if (idx < 0) idx += n_;
      else if (idx >= n_) idx -= n_;
      acc += weights_[static_cast<std::size_t>(o + r)] * in[static_cast<std::size_t>(idx)];
    }
    out[static_cast<std::size_t>(i)] = acc;
  }
}

std::vector<double> PeriodicStencil::apply(std::span<const double> in) const {
  std::vector<double> out(in.size());
  apply(in, out);
  return out;
}

Eigen::MatrixXd PeriodicStencil::dense() const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n_, n_);
  const int r = radius();
  for (int i = 0; i < n_; ++i) {
    for (int o = -r; o <= r; ++o) {
      const int col = ((i + o) % n_ + n_) % n_;
      m(i, col) += weights_[static_cast<std::size_t>(o + r)];
    }
  }
  return m;
}

std::complex<double> PeriodicStencil::symbol(double q) const {
  std::complex<double> s = 0.0;
  const int r = radius();
  for (int o = -r; o <= r; ++o) {
    s += weights_[static_cast<std::size_t>(o + r)] * std::polar(1.0, q * o * h_);
  }
  return s;
}

Eigen::MatrixXd spectral_derivative_matrix(int order, int n, double period) {
  if (order < 0) throw std::invalid_argument("spectral_derivative_matrix: negative order");
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("spectral_derivative_matrix: n must be even");
  const double dq = kTwoPi / period;
  // The matrix is circulant; column[d] is the inverse DFT of the symbol.
  std::vector<std::complex<double>> symbol(static_cast<std::size_t>(n));
  const std::complex<double> I(0.0, 1.0);
  for (int s = 0; s < n; ++s) {
    const int j = s <= n / 2 ? s : s - n;
    if (s == n / 2 && order % 2 == 1) {
      symbol[static_cast<std::size_t>(s)] = 0.0;
    } else {
      symbol[static_cast<std::size_t>(s)] = std::pow(I * (dq * j), order);
    }
  }
  std::vector<double> column(static_cast<std::size_t>(n));
  for (int d = 0; d < n; ++d) {
    std::complex<double> acc = 0.0;
    for (int s = 0; s < n; ++s) {
      const long long phase = (static_cast<long long>(s) * d) % n;
      acc += symbol[static_cast<std::size_t>(s)] * std::polar(1.0, kTwoPi * static_cast<double>(phase) / n);
    }
    column[static_cast<std::size_t>(d)] = acc.real() / n;
  }
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int l = 0; l < n; ++l) m(i, l) = column[static_cast<std::size_t>(((i - l) % n + n) % n)];
  }
  return m;
}

Eigen::MatrixXcd spectral_derivative_matrix(int order, int n, double period, double theta) {
  if (order < 0) throw std::invalid_argument("spectral_derivative_matrix: negative order");
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("spectral_derivative_matrix: n must be even");
  const double dq = kTwoPi / period;
  const std::complex<double> I(0.0, 1.0);
  std::vector<std::complex<double>> symbol(static_cast<std::size_t>(n));
  for (int s = 0; s < n; ++s) {
    const int j = s <= n / 2 ? s : s - n;
    symbol[static_cast<std::size_t>(s)] = std::pow(I * (dq * j + theta), order);
  }
  std::vector<std::complex<double>> column(static_cast<std::size_t>(n));
  for (int d = 0; d < n; ++d) {
    std::complex<double> acc = 0.0;
    for (int s = 0; s < n; ++s) {
      const long long phase = (static_cast<long long>(s) * d) % n;
      acc += symbol[static_cast<std::size_t>(s)] * std::polar(1.0, kTwoPi * static_cast<double>(phase) / n);
    }
    column[static_cast<std::size_t>(d)] = acc / static_cast<double>(n);
  }
  Eigen::MatrixXcd m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int l = 0; l < n; ++l) m(i, l) = column[static_cast<std::size_t>(((i - l) % n + n) % n)];
  }
  return m;
}

}  // namespace chwave
