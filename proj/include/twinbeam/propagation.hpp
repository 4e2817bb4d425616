#pragma once

#include <memory>
#include <optional>
#include <utility>

#include "twinbeam/dispersion.hpp"
#include "twinbeam/phasematch.hpp"

namespace twinbeam {

/// Spectral transmission centred at degeneracy. A zero edge width gives the hard
/// box |Omega| <= full_width/2; otherwise a cos^2 roll-off of that width is
/// centred on each box edge.
struct SpectralWindow {
  double full_width;        // rad/s
  double edge_width = 0.0;  // rad/s

  double value(double omega) const;
  double support_half_width() const { return 0.5 * (full_width + edge_width); }

  bool operator==(const SpectralWindow&) const = default;
};

/// How the imaging-defocus phase is applied.
enum class DefocusModel {
  literal,  // exp[-i q^2 c dz / (omega_1 (1 - Omega^2/omega_1^2))]
  chirp,    // q^2 replaced by its phase-matched value Omega^2 k_1 k_1''
};

struct TransferSpec {
  double delay = 0.0;    // s, applied to the M2 arm
  double defocus = 0.0;  // m
  std::optional<SpectralWindow> window;
  std::optional<double> pinhole_half_angle;  // rad
  double gap_q_min = 0.0;                    // rad/m
  double amplitude_transmission = 1.0;
  DefocusModel defocus_model = DefocusModel::literal;

  void validate() const;

  bool operator==(const TransferSpec&) const = default;
};

/// Closed q interval; empty when lo > hi.
struct QInterval {
  double lo, hi;
  bool empty() const { return !(hi > lo); }
};

/// H_+(w) H_-(-w) for a fixed transfer spec in a given medium.
class TransferPath {
 public:
  TransferPath(std::shared_ptr<const Medium> medium, TransferSpec spec);

  const TransferSpec& spec() const { return spec_; }
  const Medium& medium() const { return *medium_; }

  /// Full product including the delay phase exp(-i Omega dt).
  complex product(const SpectralMode& mode) const;
  /// Product with the delay phase omitted (everything that does not depend on dt).
  complex static_product(const SpectralMode& mode) const;
  /// exp(-i Omega dt).
  complex delay_phase(double omega) const;

  /// Gate of the window, pinhole and gap (0 or window value), without phases.
  double gate(const SpectralMode& mode) const;
  /// Defocus propagation phase (radians).
  double defocus_phase(const SpectralMode& mode) const;

  /// q range admitted by the pinhole and the gap at this Omega.
  QInterval q_support(double omega) const;
  /// Omega range admitted by the window; nullopt when unrestricted.
  std::optional<double> omega_support_half_width() const;

 private:
  void check_domain(double omega) const;

  std::shared_ptr<const Medium> medium_;
  TransferSpec spec_;
  double omega1_;
  double chirp_coefficient_ = 0.0;  // k_1'' n_1(omega_1)
};

/// Half-angle subtended by a circular pinhole of the given diameter at a distance.
double pinhole_from_geometry(double diameter, double distance);

/// Full width 2 Omega_max of the band phase matched inside the pinhole, with
/// k_1 sin(alpha) = sqrt(k_1 k_1'') Omega_max; clipped by the window width.
double effective_bandwidth(const TransferSpec& spec, const Medium& medium);

}  // namespace twinbeam
