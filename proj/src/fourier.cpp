#include "twinbeam/fourier.hpp"

#include <bit>
#include <cmath>

#include <fftw3.h>

#include "twinbeam/constants.hpp"
#include "twinbeam/errors.hpp"

namespace twinbeam {

using complex = std::complex<double>;

namespace {

double sinc_squared_half(double theta) {
  const double x = 0.5 * theta;
  if (std::abs(x) < 1e-4) return 1.0 - x * x / 3.0;
  const double s = std::sin(x) / x;
  return s * s;
}

void check_spectrum(const Spectrum& s) {
  if (s.axis.n < 2 || s.values.size() != s.axis.n) {
    throw PreconditionError("spectrum needs at least two samples on its axis");
  }
  if (!(s.axis.hi > s.axis.lo)) throw PreconditionError("spectrum axis must be increasing");
}

// RAII wrapper around an in-place FFTW plan.
class FftwBuffer {
 public:
  explicit FftwBuffer(std::size_t n)
      : n_(n), data_(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n))) {
    if (!data_) throw std::bad_alloc();
    plan_ = fftw_plan_dft_1d(static_cast<int>(n), data_, data_, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  ~FftwBuffer() {
    fftw_destroy_plan(plan_);
    fftw_free(data_);
  }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;

  complex* data() { return reinterpret_cast<complex*>(data_); }
  void execute() { fftw_execute(plan_); }
  std::size_t size() const { return n_; }

 private:
  std::size_t n_;
  fftw_complex* data_;
  fftw_plan plan_;
};

}  // namespace

complex half_hat_transform(double theta) {
  if (std::abs(theta) < 0.5) {
    // sum_n (i theta)^n / (n+2)!
    complex term(0.5, 0.0);
    complex sum = term;
    const complex it(0.0, theta);
    for (int n = 1; n < 18; ++n) {
      term *= it / static_cast<double>(n + 2);
      sum += term;
    }
    return sum;
  }
  const complex e = std::polar(1.0, theta);
  return (complex(1.0, theta) - e) / (theta * theta);
}

complex fourier_direct(const Spectrum& s, double t) {
  check_spectrum(s);
  const std::size_t n = s.axis.n;
  const double h = s.axis.step();
  const double theta = h * t;
  const double interior = sinc_squared_half(theta);
  const complex edge = half_hat_transform(theta);

  complex sum = s.values[0] * edge * std::polar(1.0, s.axis.node(0) * t);
  for (std::size_t j = 1; j + 1 < n; ++j) {
    sum += s.values[j] * interior * std::polar(1.0, s.axis.node(j) * t);
  }
  sum += s.values[n - 1] * std::conj(edge) * std::polar(1.0, s.axis.node(n - 1) * t);
  return sum * (h / kTwoPi);
}

FourierSeries fourier_fft(const Spectrum& s, std::size_t min_size) {
  check_spectrum(s);
  const std::size_t n = s.axis.n;
  const std::size_t m_size = std::bit_ceil(std::max(n, min_size));
  const double h = s.axis.step();
  const double omega0 = s.axis.lo;

  FftwBuffer buf(m_size);
  complex* d = buf.data();
  for (std::size_t j = 0; j < m_size; ++j) d[j] = j < n ? s.values[j] : complex(0.0, 0.0);
  buf.execute();

  FourierSeries out;
  out.delays.resize(m_size);
  out.values.resize(m_size);
  const long half = static_cast<long>(m_size / 2);
  for (long k = -half; k < half; ++k) {
    const std::size_t idx = static_cast<std::size_t>(k + half);
    const std::size_t bin = static_cast<std::size_t>((k + static_cast<long>(m_size)) %
                                                     static_cast<long>(m_size));
    const double t = kTwoPi * static_cast<double>(k) / (static_cast<double>(m_size) * h);
    const double theta = h * t;
    const double interior = sinc_squared_half(theta);
    const complex edge = half_hat_transform(theta);
    const complex base = std::polar(1.0, omega0 * t);
    const long wrap = (static_cast<long>(n - 1) * k) % static_cast<long>(m_size);
    const complex last_phase =
        base * std::polar(1.0, kTwoPi * static_cast<double>(wrap) / static_cast<double>(m_size));
    complex v = interior * base * d[bin];
    v += s.values[0] * base * (edge - interior);
    v += s.values[n - 1] * last_phase * (std::conj(edge) - interior);
    out.delays[idx] = t;
    out.values[idx] = v * (h / kTwoPi);
  }
  return out;
}

}  // namespace twinbeam
