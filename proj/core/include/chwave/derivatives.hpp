#pragma once

#include <Eigen/Dense>

#include <complex>
#include <span>
#include <vector>

namespace chwave {

/// Fourth-order accurate central finite-difference stencil for the
/// derivative of order 1..4 on a uniform periodic grid. Indices wrap
/// circularly, so every row sums to zero and constants are annihilated.
class PeriodicStencil {
 public:
  PeriodicStencil(int order, int n, double period);

  int order() const noexcept { return order_; }
  int size() const noexcept { return n_; }
  int radius() const noexcept { return static_cast<int>(weights_.size() / 2); }
  double spacing() const noexcept { return h_; }

  /// Weights for offsets -radius..radius, already divided by h^order.
  std::span<const double> weights() const noexcept { return weights_; }

  void apply(std::span<const double> in, std::span<double> out) const;
  std::vector<double> apply(std::span<const double> in) const;

  Eigen::MatrixXd dense() const;

  /// Eigenvalue of the stencil on exp(i q eta): sum_o w_o exp(i q o h).
  std::complex<double> symbol(double q) const;

 private:
  int order_;
  int n_;
  double h_;
  std::vector<double> weights_;
};

/// Dense Fourier (pseudospectral) differentiation matrix of the given order.
/// For odd orders the Nyquist mode is dropped so the matrix stays real.
Eigen::MatrixXd spectral_derivative_matrix(int order, int n, double period);

/// Bloch-shifted spectral differentiation: acts on the periodic factor p of
/// exp(i theta eta) p(eta), i.e. symbol (i (q_j + theta))^order.
Eigen::MatrixXcd spectral_derivative_matrix(int order, int n, double period, double theta);

}  // namespace chwave
