#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace twinbeam {

/// Uniform frequency axis with n nodes from lo to hi inclusive.
struct OmegaAxis {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t n = 0;

  double step() const { return (hi - lo) / static_cast<double>(n - 1); }
  double node(std::size_t j) const { return j + 1 == n ? hi : lo + static_cast<double>(j) * step(); }
};

/// Samples of a spectral function S(Omega_j) on a uniform axis.
struct Spectrum {
  OmegaAxis axis;
  std::vector<std::complex<double>> values;
};

/// integral_0^1 (1 - s) exp(i theta s) ds, with a series near theta = 0.
std::complex<double> half_hat_transform(double theta);

/// integral dOmega/(2 pi) exp(i Omega t) S(Omega), with S interpolated linearly
/// between nodes and the exponential integrated exactly (Filon-trapezoid).
std::complex<double> fourier_direct(const Spectrum& s, double t);

struct FourierSeries {
  std::vector<double> delays;  // s, increasing
  std::vector<std::complex<double>> values;
};

/// Same quadrature as fourier_direct, evaluated on the natural delay grid
/// t_m = 2 pi m / (M h), m in [-M/2, M/2), through one FFT of size M, where M is
/// the smallest power of two >= max(n, min_size).
FourierSeries fourier_fft(const Spectrum& s, std::size_t min_size = 0);

}  // namespace twinbeam
