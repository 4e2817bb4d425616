#pragma once

#include <algorithm>
#include <complex>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "twinbeam/dispersion.hpp"

namespace twinbeam {

using complex = std::complex<double>;

/// Unnormalized sinc: sin(x)/x.
double sinc(double x);

/// A Fourier mode w = (q, Omega): transverse wave-vector magnitude (rad/m) and
/// frequency offset from omega_1 (rad/s).
struct SpectralMode {
  double q = 0.0;
  double omega = 0.0;
};

/// Which argument the SFG amplitude feeds to sinc: Delta_SFG/2 (matching F_PDC)
/// or Delta_SFG as printed in the up-conversion amplitude.
enum class SincArgument { half, full };

struct CrystalSpec {
  double length = 4e-3;          // m
  double gain = 1.0;             // g for PDC, sigma * l_c' for SFG
  PumpMode pump_mode = TunedPump{};
  double mismatch_offset = 0.0;  // added to Delta

  bool operator==(const CrystalSpec&) const = default;
};

/// Phase-mismatch evaluation at a fixed Omega, with k_1(+-Omega) cached.
class PhaseRow {
 public:
  PhaseRow(const Medium& medium, double length, double k_pump, double offset, double omega);

  double omega() const { return omega_; }
  /// Delta(q, Omega) = l_c (k_z(q, Omega) + k_z(q, -Omega) - k_0) + offset.
  double delta(double q) const;
  /// Largest q for which both +-Omega are propagating.
  double q_limit() const { return std::min(k_plus_, k_minus_); }

 private:
  const Medium* medium_;
  double length_;
  double offset_;
  double omega_;
  double k_plus_;
  double k_minus_;
  double on_axis_;  // l_c (k(+) + k(-) - k_0) + offset
};

class Crystal {
 public:
  Crystal(std::shared_ptr<const Medium> medium, CrystalSpec spec);

  const CrystalSpec& spec() const { return spec_; }
  const Medium& medium() const { return *medium_; }
  const std::shared_ptr<const Medium>& medium_ptr() const { return medium_; }
  double pump_wavenumber() const { return k_pump_; }

  PhaseRow row(double omega) const;

  double delta(const SpectralMode& mode) const;
  /// -q^2 l_c / k_1 + k_1'' l_c Omega^2 (+ offset).
  double delta_quadratic(const SpectralMode& mode) const;

  /// Low-gain pair-generation amplitude g sinc(Delta/2) exp(i Delta/2).
  complex f_pdc(const SpectralMode& mode) const;
  /// Up-conversion amplitude sigma l_c' sinc(arg) exp(i Delta/2).
  complex f_sfg(const SpectralMode& mode, SincArgument arg) const;

 private:
  std::shared_ptr<const Medium> medium_;
  CrystalSpec spec_;
  double k_pump_;
};

/// Amplitude helpers shared by the quadrature loops.
complex pdc_amplitude(double gain, double delta);
complex sfg_amplitude(double gain, double delta, SincArgument arg);

struct LocusPoint {
  double omega;
  std::optional<double> q;  // empty when Delta(., Omega) has no root with q >= 0
};

/// For each Omega the q >= 0 root of Delta(q, Omega) = 0.
std::vector<LocusPoint> phase_matching_locus(const Crystal& crystal, std::span<const double> omegas);

}  // namespace twinbeam
