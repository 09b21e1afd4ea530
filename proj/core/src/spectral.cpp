#include "chwave/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>

namespace chwave {

namespace {

// FFTW's planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

struct Fft::Impl {
  int n = 0;
  fftw_complex* in = nullptr;
  fftw_complex* out = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;

  explicit Impl(int size) : n(size) {
    std::lock_guard lock(planner_mutex());
    in = fftw_alloc_complex(static_cast<std::size_t>(n));
    out = fftw_alloc_complex(static_cast<std::size_t>(n));
    fwd = fftw_plan_dft_1d(n, in, out, FFTW_FORWARD, FFTW_ESTIMATE);
    bwd = fftw_plan_dft_1d(n, in, out, FFTW_BACKWARD, FFTW_ESTIMATE);
  }

  ~Impl() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
    fftw_free(in);
    fftw_free(out);
  }
};

Fft::Fft(int n) {
  if (n < 2) throw std::invalid_argument("Fft: size must be >= 2");
  impl_ = std::make_unique<Impl>(n);
}

Fft::~Fft() = default;
Fft::Fft(Fft&&) noexcept = default;
Fft& Fft::operator=(Fft&&) noexcept = default;

int Fft::size() const noexcept { return impl_->n; }

void Fft::forward(std::span<const double> x, std::span<Complex> out) {
  const int n = impl_->n;
  if (static_cast<int>(x.size()) != n || static_cast<int>(out.size()) != n) {
    throw std::invalid_argument("Fft::forward: size mismatch");
  }
  for (int i = 0; i < n; ++i) {
    impl_->in[i][0] = x[static_cast<std::size_t>(i)];
    impl_->in[i][1] = 0.0;
  }
  fftw_execute(impl_->fwd);
  const double scale = 1.0 / n;
  for (int i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = Complex(impl_->out[i][0] * scale, impl_->out[i][1] * scale);
  }
}

void Fft::forward(std::span<const Complex> x, std::span<Complex> out) {
  const int n = impl_->n;
  if (static_cast<int>(x.size()) != n || static_cast<int>(out.size()) != n) {
    throw std::invalid_argument("Fft::forward: size mismatch");
  }
  for (int i = 0; i < n; ++i) {
    impl_->in[i][0] = x[static_cast<std::size_t>(i)].real();
    impl_->in[i][1] = x[static_cast<std::size_t>(i)].imag();
  }
  fftw_execute(impl_->fwd);
  const double scale = 1.0 / n;
  for (int i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = Complex(impl_->out[i][0] * scale, impl_->out[i][1] * scale);
  }
}

std::vector<Complex> Fft::forward(std::span<const double> x) {
  std::vector<Complex> out(static_cast<std::size_t>(impl_->n));
  forward(x, out);
  return out;
}

void Fft::inverse(std::span<const Complex> a, std::span<Complex> out) {
  const int n = impl_->n;
  if (static_cast<int>(a.size()) != n || static_cast<int>(out.size()) != n) {
    throw std::invalid_argument("Fft::inverse: size mismatch");
  }
  for (int i = 0; i < n; ++i) {
    impl_->in[i][0] = a[static_cast<std::size_t>(i)].real();
    impl_->in[i][1] = a[static_cast<std::size_t>(i)].imag();
  }
  fftw_execute(impl_->bwd);
  for (int i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = Complex(impl_->out[i][0], impl_->out[i][1]);
  }
}

double Fft::inverse(std::span<const Complex> a, std::span<double> out) {
  const int n = impl_->n;
  if (static_cast<int>(a.size()) != n || static_cast<int>(out.size()) != n) {
    throw std::invalid_argument("Fft::inverse: size mismatch");
  }
  for (int i = 0; i < n; ++i) {
    impl_->in[i][0] = a[static_cast<std::size_t>(i)].real();
    impl_->in[i][1] = a[static_cast<std::size_t>(i)].imag();
  }
  fftw_execute(impl_->bwd);
  double max_imag = 0.0;
  for (int i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = impl_->out[i][0];
    max_imag = std::max(max_imag, std::abs(impl_->out[i][1]));
  }
  return max_imag;
}

std::vector<double> Fft::inverse(std::span<const Complex> a, double* max_imag) {
  std::vector<double> out(static_cast<std::size_t>(impl_->n));
  const double im = inverse(a, std::span<double>(out));
  if (max_imag) *max_imag = im;
  return out;
}

int fft_index(int slot, int n) noexcept { return slot <= n / 2 ? slot : slot - n; }

double conjugate_symmetry_error(std::span<const Complex> coeffs) {
  const std::size_t n = coeffs.size();
  double err = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t mirror = (n - j) % n;
    err = std::max(err, std::abs(coeffs[mirror] - std::conj(coeffs[j])));
  }
  return err;
}

SpectralState to_spectral(const Profile& p, double time) {
  Fft fft(p.size());
  return SpectralState{fft.forward(p.values()), p.params(), time};
}

Profile to_profile(const SpectralState& s, double imag_tol) {
  Fft fft(static_cast<int>(s.coeffs.size()));
  double max_imag = 0.0;
  std::vector<double> values = fft.inverse(s.coeffs, &max_imag);
  if (max_imag > imag_tol) {
    throw std::runtime_error("to_profile: field is not real (imaginary residue " +
                             std::to_string(max_imag) + ")");
  }
  return Profile(s.params, std::move(values));
}

}  // namespace chwave
