#include "twinbeam/propagation.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "twinbeam/constants.hpp"
#include "twinbeam/errors.hpp"

namespace twinbeam {

double SpectralWindow::value(double omega) const {
  const double x = std::abs(omega);
  const double half = 0.5 * full_width;
  if (edge_width <= 0.0) return x <= half ? 1.0 : 0.0;
  const double a = half - 0.5 * edge_width;
  const double b = half + 0.5 * edge_width;
  if (x <= a) return 1.0;
  if (x >= b) return 0.0;
  const double c = std::cos(0.5 * kPi * (x - a) / edge_width);
  return c * c;
}

void TransferSpec::validate() const {
  if (window) {
    if (!(window->full_width > 0.0)) throw PreconditionError("window width must be positive");
    if (!(window->edge_width >= 0.0) || window->edge_width > window->full_width) {
      throw PreconditionError("window edge width must lie in [0, full width]");
    }
  }
  if (pinhole_half_angle && !(*pinhole_half_angle > 0.0 && *pinhole_half_angle < kPi / 2.0)) {
    throw PreconditionError("pinhole half-angle must lie in (0, pi/2)");
  }
  if (!(gap_q_min >= 0.0)) throw PreconditionError("gap cutoff must be non-negative");
  if (!(amplitude_transmission >= 0.0 && amplitude_transmission <= 1.0)) {
    throw PreconditionError("amplitude transmission must lie in [0, 1]");
  }
  if (!std::isfinite(delay) || !std::isfinite(defocus)) {
    throw PreconditionError("delay and defocus must be finite");
  }
}

TransferPath::TransferPath(std::shared_ptr<const Medium> medium, TransferSpec spec)
    : medium_(std::move(medium)), spec_(std::move(spec)) {
  if (!medium_) throw PreconditionError("transfer path requires a medium");
  spec_.validate();
  omega1_ = medium_->fields().central_frequency;
  if (spec_.defocus != 0.0 && spec_.defocus_model == DefocusModel::chirp) {
    chirp_coefficient_ = medium_->gvd_signal() * medium_->central_index();
  }
}

void TransferPath::check_domain(double omega) const {
  if (!(std::abs(omega) < omega1_)) {
    std::ostringstream os;
    os.precision(9);
    os << "|Omega| = " << std::abs(omega) << " rad/s must stay below omega_1 = " << omega1_;
    throw DomainError(os.str());
  }
}

double TransferPath::gate(const SpectralMode& mode) const {
  double g = spec_.window ? spec_.window->value(mode.omega) : 1.0;
  if (g == 0.0) return 0.0;
  if (mode.q < spec_.gap_q_min) return 0.0;
  if (spec_.pinhole_half_angle &&
      mode.q > medium_->k_signal(mode.omega) * std::sin(*spec_.pinhole_half_angle)) {
    return 0.0;
  }
  return g;
}

double TransferPath::defocus_phase(const SpectralMode& mode) const {
  if (spec_.defocus == 0.0) return 0.0;
  const double r = mode.omega / omega1_;
  const double denom = 1.0 - r * r;
  if (spec_.defocus_model == DefocusModel::chirp) {
    return -mode.omega * mode.omega * chirp_coefficient_ * spec_.defocus / denom;
  }
  return -mode.q * mode.q * kSpeedOfLight * spec_.defocus / (omega1_ * denom);
}

complex TransferPath::delay_phase(double omega) const {
  return std::polar(1.0, -omega * spec_.delay);
}

complex TransferPath::static_product(const SpectralMode& mode) const {
  check_domain(mode.omega);
  const double g = gate(mode) * spec_.amplitude_transmission;
  if (g == 0.0) return 0.0;
  const double phase = defocus_phase(mode);
  if (phase == 0.0) return g;
  return std::polar(g, phase);
}

complex TransferPath::product(const SpectralMode& mode) const {
  return static_product(mode) * delay_phase(mode.omega);
}

QInterval TransferPath::q_support(double omega) const {
  QInterval out{spec_.gap_q_min, std::numeric_limits<double>::infinity()};
  if (spec_.pinhole_half_angle) {
    out.hi = medium_->k_signal(omega) * std::sin(*spec_.pinhole_half_angle);
  }
  return out;
}

std::optional<double> TransferPath::omega_support_half_width() const {
  if (!spec_.window) return std::nullopt;
  return spec_.window->support_half_width();
}

double pinhole_from_geometry(double diameter, double distance) {
  if (!(diameter > 0.0 && distance > 0.0)) {
    throw PreconditionError("pinhole diameter and distance must be positive");
  }
  const double half = std::atan(0.5 * diameter / distance);
  if (!(half < kPi / 2.0)) throw PreconditionError("pinhole half-angle must be below pi/2");
  return half;
}

double effective_bandwidth(const TransferSpec& spec, const Medium& medium) {
  if (!spec.pinhole_half_angle) {
    throw PreconditionError("effective bandwidth requires a pinhole");
  }
  const double k1 = medium.k_signal(0.0);
  const double gvd = medium.gvd_signal();
  if (!(gvd > 0.0)) throw DomainError("effective bandwidth requires k_1'' > 0");
  const double q_max = k1 * std::sin(*spec.pinhole_half_angle);
  double width = 2.0 * q_max / std::sqrt(k1 * gvd);
  if (spec.window) width = std::min(width, spec.window->full_width);
  return width;
}

}  // namespace twinbeam
