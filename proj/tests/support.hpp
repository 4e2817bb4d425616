#pragma once

// Small helpers shared by the unit tests: seeded generators for the property
// tests and a BBO medium at the 527.5 nm pump.

#include <cmath>
#include <cstdint>
#include <memory>
#include <random>
#include <vector>

#include "twinbeam/dispersion.hpp"

namespace tbtest {

inline std::shared_ptr<const twinbeam::Medium> bbo_medium(
    std::optional<double> gvd_override = {}) {
  return std::make_shared<const twinbeam::Medium>(
      twinbeam::DispersionModel::bbo(), twinbeam::FieldParams::from_pump_wavelength(527.5e-9),
      gvd_override);
}

inline std::shared_ptr<const twinbeam::Medium> constant_medium(double n) {
  return std::make_shared<const twinbeam::Medium>(
      twinbeam::DispersionModel::constant(n),
      twinbeam::FieldParams::from_pump_wavelength(527.5e-9));
}

// Uniform draws with a fixed seed; every property test names its own seed so
// a failure reproduces from the test source alone.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }
  double log_uniform(double lo, double hi) {
    return std::exp(uniform(std::log(lo), std::log(hi)));
  }
  double normal(double sigma) { return std::normal_distribution<double>(0.0, sigma)(rng_); }
  int sign() { return uniform(0.0, 1.0) < 0.5 ? -1 : 1; }

 private:
  std::mt19937_64 rng_;
};

inline double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace tbtest
