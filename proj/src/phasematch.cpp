#include "twinbeam/phasematch.hpp"

#include <cmath>

#include <boost/math/tools/roots.hpp>

#include "twinbeam/errors.hpp"

namespace twinbeam {

double sinc(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

PhaseRow::PhaseRow(const Medium& medium, double length, double k_pump, double offset, double omega)
    : medium_(&medium),
      length_(length),
      offset_(offset),
      omega_(omega),
      k_plus_(medium.k_signal(omega)),
      k_minus_(medium.k_signal(-omega)),
      on_axis_(length * (k_plus_ + k_minus_ - k_pump) + offset) {}

double PhaseRow::delta(double q) const {
  if (q == 0.0) return on_axis_;
  const double shift = medium_->k_z_shift(q, k_plus_) + medium_->k_z_shift(q, k_minus_);
  return on_axis_ + length_ * shift;
}

Crystal::Crystal(std::shared_ptr<const Medium> medium, CrystalSpec spec)
    : medium_(std::move(medium)), spec_(spec) {
  if (!medium_) throw PreconditionError("crystal requires a medium");
  if (!(spec_.length > 0.0)) throw PreconditionError("crystal length must be positive");
  if (!(spec_.gain >= 0.0)) throw PreconditionError("crystal gain must be non-negative");
  k_pump_ = medium_->pump_wavenumber(spec_.pump_mode);
}

PhaseRow Crystal::row(double omega) const {
  return PhaseRow(*medium_, spec_.length, k_pump_, spec_.mismatch_offset, omega);
}

double Crystal::delta(const SpectralMode& mode) const {
  if (mode.q < 0.0) throw PreconditionError("radial mode requires q >= 0");
  return row(mode.omega).delta(mode.q);
}

double Crystal::delta_quadratic(const SpectralMode& mode) const {
  const double k1 = medium_->k_signal(0.0);
  const double gvd = medium_->gvd_signal();
  const double l = spec_.length;
  return -mode.q * mode.q * l / k1 + gvd * l * mode.omega * mode.omega + spec_.mismatch_offset;
}

complex pdc_amplitude(double gain, double delta) {
  return gain * sinc(0.5 * delta) * std::polar(1.0, 0.5 * delta);
}

complex sfg_amplitude(double gain, double delta, SincArgument arg) {
  const double s = arg == SincArgument::half ? sinc(0.5 * delta) : sinc(delta);
  return gain * s * std::polar(1.0, 0.5 * delta);
}

complex Crystal::f_pdc(const SpectralMode& mode) const {
  return pdc_amplitude(spec_.gain, delta(mode));
}

complex Crystal::f_sfg(const SpectralMode& mode, SincArgument arg) const {
  return sfg_amplitude(spec_.gain, delta(mode), arg);
}

std::vector<LocusPoint> phase_matching_locus(const Crystal& crystal,
                                             std::span<const double> omegas) {
  std::vector<LocusPoint> out;
  out.reserve(omegas.size());
  for (double omega : omegas) {
    const PhaseRow row = crystal.row(omega);
    const double d0 = row.delta(0.0);
    if (d0 == 0.0) {
      out.push_back({omega, 0.0});
      continue;
    }
    // Delta decreases monotonically in u = q^2, and is close to linear in u.
    const double u_hi = row.q_limit() * row.q_limit();
    const double d_hi = row.delta(row.q_limit());
    if (d0 < 0.0 || d_hi > 0.0) {
      out.push_back({omega, std::nullopt});
      continue;
    }
    auto residual = [&](double u) { return row.delta(std::sqrt(u)); };
    boost::uintmax_t max_iter = 300;
    const auto [lo, hi] = boost::math::tools::toms748_solve(
        residual, 0.0, u_hi, d0, d_hi, boost::math::tools::eps_tolerance<double>(53), max_iter);
    const double q_lo = std::sqrt(lo), q_hi = std::sqrt(hi);
    out.push_back(
        {omega, std::abs(row.delta(q_lo)) <= std::abs(row.delta(q_hi)) ? q_lo : q_hi});
  }
  return out;
}

}  // namespace twinbeam
