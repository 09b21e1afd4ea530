#pragma once

#include <complex>
#include <memory>
#include <span>
#include <vector>

#include "chwave/params.hpp"
#include "chwave/profile.hpp"

namespace chwave {

using Complex = std::complex<double>;

/// Fourier amplitudes a_j of a real field in FFT order (j = 0, 1, ..., N/2,
/// -N/2+1, ..., -1), normalised so that C(eta_i) = sum_j a_j exp(i q_j eta_i).
struct SpectralState {
  std::vector<Complex> coeffs;
  ProblemParams params;
  double time = 0.0;
};

/// Signed wavenumber index of FFT slot `slot` for transform size n.
int fft_index(int slot, int n) noexcept;

/// max_j |a_{-j} - conj(a_j)|.
double conjugate_symmetry_error(std::span<const Complex> coeffs);

/// One-dimensional complex FFT of fixed size backed by FFTW. Each instance
/// owns its plans and buffers; instances must not be shared across threads.
class Fft {
 public:
  explicit Fft(int n);
  ~Fft();
  Fft(Fft&&) noexcept;
  Fft& operator=(Fft&&) noexcept;
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;

  int size() const noexcept;

  /// a_j = (1/N) sum_i x_i exp(-2 pi i j i / N).
  void forward(std::span<const double> x, std::span<Complex> out);
  void forward(std::span<const Complex> x, std::span<Complex> out);
  std::vector<Complex> forward(std::span<const double> x);

  /// x_i = sum_j a_j exp(2 pi i j i / N). Returns max |Im x_i|.
  double inverse(std::span<const Complex> a, std::span<double> out);
  void inverse(std::span<const Complex> a, std::span<Complex> out);
  std::vector<double> inverse(std::span<const Complex> a, double* max_imag = nullptr);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

SpectralState to_spectral(const Profile& p, double time = 0.0);

/// Inverse transform; throws if the imaginary residue exceeds `imag_tol`.
Profile to_profile(const SpectralState& s, double imag_tol = 1e-10);

}  // namespace chwave
