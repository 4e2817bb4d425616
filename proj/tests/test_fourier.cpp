#include "doctest.h"

#include <cmath>
#include <complex>

#include "support.hpp"
#include "twinbeam/constants.hpp"
#include "twinbeam/errors.hpp"
#include "twinbeam/fourier.hpp"
#include "twinbeam/phasematch.hpp"

using namespace twinbeam;
using cd = std::complex<double>;

namespace {

Spectrum sampled(double lo, double hi, std::size_t n, auto f) {
  Spectrum s{OmegaAxis{lo, hi, n}, {}};
  for (std::size_t j = 0; j < n; ++j) s.values.push_back(f(s.axis.node(j)));
  return s;
}

// Brute-force integral_0^1 (1 - s) exp(i theta s) ds by composite Simpson.
cd half_hat_reference(double theta) {
  const int n = 20000;
  cd sum = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double s = static_cast<double>(i) / n;
    const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    sum += w * (1.0 - s) * std::exp(cd(0.0, theta * s));
  }
  return sum / (3.0 * n);
}

}  // namespace

TEST_CASE("axis nodes end exactly on hi") {
  const OmegaAxis a{-0.45e15, 0.45e15, 1001};
  CHECK(a.node(0) == a.lo);
  CHECK(a.node(1000) == a.hi);
  CHECK(a.step() == doctest::Approx(0.9e12));
}

TEST_CASE("half-hat transform") {
  CHECK(half_hat_transform(0.0) == cd(0.5, 0.0));
  for (double th : {1e-6, 0.3, 0.4999, 0.5001, 1.0, 3.0, -2.0, 25.0}) {
    CHECK(std::abs(half_hat_transform(th) - half_hat_reference(th)) < 1e-12);
  }
  // Continuous across the series switch.
  CHECK(std::abs(half_hat_transform(std::nextafter(0.5, 0.0)) - half_hat_transform(0.5)) < 1e-15);
}

TEST_CASE("box spectrum transforms to a sinc") {
  const double w = 0.9e15;
  const auto s = sampled(-0.5 * w, 0.5 * w, 257, [](double) { return cd(1.0, 0.0); });
  for (double t : {0.0, 1e-15, 6.2e-15, -13e-15, 60e-15}) {
    const cd expected = w / kTwoPi * sinc(0.5 * w * t);
    CHECK(std::abs(fourier_direct(s, t) - expected) < 1e-12 * w / kTwoPi);
  }
}

TEST_CASE("linear spectra are integrated exactly") {
  const double a = -2e14, b = 3e14;
  const auto s = sampled(a, b, 17, [](double om) { return cd(om * 1e-14, -2.0); });
  for (double t : {0.0, 4e-15, -17e-15}) {
    // integral of (c om + d) exp(i om t) over [a, b], closed form.
    auto prim = [&](double om) {
      if (t == 0.0) return cd(0.5e-14 * om * om, -2.0 * om);  // d = -2i
      const cd it(0.0, t);
      const cd e = std::exp(it * om);
      return 1e-14 * e * (om / it + 1.0 / (t * t)) + cd(0.0, -2.0) * e / it;
    };
    const cd expected = (prim(b) - prim(a)) / kTwoPi;
    CHECK(std::abs(fourier_direct(s, t) - expected) < 1e-12 * std::abs(prim(b) - prim(a)));
  }
}

TEST_CASE("Gaussian converges to its analytic transform at second order") {
  const double sig = 0.1e15;
  auto gauss = [&](double om) { return cd(std::exp(-0.5 * om * om / (sig * sig)), 0.0); };
  const double t = 10e-15;
  const double exact = sig / std::sqrt(kTwoPi) * std::exp(-0.5 * sig * sig * t * t);
  const double e1 = std::abs(fourier_direct(sampled(-8 * sig, 8 * sig, 101, gauss), t) - exact);
  const double e2 = std::abs(fourier_direct(sampled(-8 * sig, 8 * sig, 201, gauss), t) - exact);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("FFT path equals the direct path on its natural grid") {
  tbtest::Gen gen(0xff7);
  const auto s = sampled(-0.4e15, 0.45e15, 300, [&](double om) {
    return cd(gen.normal(1.0), gen.normal(1.0)) * std::exp(cd(0.0, om * 3e-15));
  });
  const FourierSeries f = fourier_fft(s, 1024);
  REQUIRE(f.delays.size() == 1024);
  const double h = s.axis.step();
  CHECK(f.delays[512] == 0.0);
  CHECK(f.delays[513] == doctest::Approx(kTwoPi / (1024 * h)));
  double scale = 0.0, dev = 0.0;
  for (std::size_t m = 0; m < f.delays.size(); ++m) {
    const cd d = fourier_direct(s, f.delays[m]);
    scale = std::max(scale, std::abs(d));
    dev = std::max(dev, std::abs(d - f.values[m]));
  }
  CHECK(dev / scale < 1e-12);
  // Size is rounded up to a power of two no smaller than n.
  CHECK(fourier_fft(s).delays.size() == 512);
}

TEST_CASE("degenerate spectra are rejected") {
  Spectrum one{OmegaAxis{0.0, 1.0, 1}, {cd(1.0)}};
  CHECK_THROWS_AS(fourier_direct(one, 0.0), PreconditionError);
  CHECK_THROWS_AS(fourier_fft(one), PreconditionError);
  Spectrum backwards{OmegaAxis{1.0, 0.0, 2}, {cd(1.0), cd(1.0)}};
  CHECK_THROWS_AS(fourier_direct(backwards, 0.0), PreconditionError);
}
