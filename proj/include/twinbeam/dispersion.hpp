#pragma once

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace twinbeam {

enum class Polarization { ordinary, extraordinary };

// Generalized Sellmeier form with lambda in micrometres:
//   n^2 = a + sum_i b_i * lambda^2 / (lambda^2 - c_i) - d * lambda^2
// The Kato/Eimerl form  A + B/(lambda^2 - C) - D lambda^2  maps onto it with
// a = A - B/C, b = B/C, c = C.
struct SellmeierTerms {
  double a = 1.0;
  std::vector<double> b;  // dimensionless
  std::vector<double> c;  // um^2
  double d = 0.0;         // um^-2

  bool operator==(const SellmeierTerms&) const = default;
};

// Refractive indices of a uniaxial crystal. Wavelength arguments are in metres.
class DispersionModel {
 public:
  DispersionModel(SellmeierTerms ordinary, SellmeierTerms extraordinary, double lambda_min,
                  double lambda_max);

  /// BBO, Tamosauskas et al., Opt. Mater. Express 8, 1410 (2018), valid 0.188-5.2 um.
  static DispersionModel bbo();
  /// Dispersionless medium with the same index for both polarizations.
  static DispersionModel constant(double index, double lambda_min = 100e-9,
                                  double lambda_max = 100e-6);

  double refractive_index(double lambda, Polarization pol) const;
  /// dn/dlambda in 1/m.
  double index_derivative(double lambda, Polarization pol) const;
  /// d^2n/dlambda^2 in 1/m^2, from the closed-form derivatives of the Sellmeier sum.
  double index_second_derivative(double lambda, Polarization pol) const;
  /// Extraordinary-wave index at angle theta to the optic axis (index ellipse).
  double extraordinary_index_at_angle(double lambda, double theta) const;

  const SellmeierTerms& terms(Polarization pol) const {
    return pol == Polarization::ordinary ? ordinary_ : extraordinary_;
  }
  std::pair<double, double> valid_range() const { return {lambda_min_, lambda_max_}; }

 private:
  void check_range(double lambda) const;

  SellmeierTerms ordinary_;
  SellmeierTerms extraordinary_;
  double lambda_min_;
  double lambda_max_;
};

// Degenerate type-I configuration: omega_0 = 2 omega_1.
struct FieldParams {
  double pump_wavelength;     // m
  double pump_frequency;      // rad/s
  double central_frequency;   // rad/s

  static FieldParams from_pump_wavelength(double lambda0);
};

struct TunedPump {
  bool operator==(const TunedPump&) const = default;
};
struct AngleTunedPump {
  double theta;  // rad, angle between pump wave vector and optic axis

  bool operator==(const AngleTunedPump&) const = default;
};
using PumpMode = std::variant<TunedPump, AngleTunedPump>;

// Signal/idler fields (ordinary) and pump (extraordinary) in one crystal material.
// All frequency offsets Omega are measured from omega_1 in rad/s.
class Medium {
 public:
  Medium(DispersionModel model, FieldParams fields, std::optional<double> gvd_override = {});

  const DispersionModel& model() const { return model_; }
  const FieldParams& fields() const { return fields_; }
  std::optional<double> gvd_override() const { return gvd_override_; }

  /// k_1(Omega) = n(2 pi c / (omega_1 + Omega)) (omega_1 + Omega) / c.
  double k_signal(double omega) const;
  /// sqrt(k_1(Omega)^2 - q^2); throws EvanescentModeError when q > k_1(Omega).
  double k_z(double q, double omega) const;
  /// k_z(q, Omega) - k_1(Omega), evaluated without cancellation.
  double k_z_shift(double q, double k) const;

  /// k_1'' at degeneracy (s^2/m); the override when one is configured.
  double gvd_signal() const;
  /// Closed-form k_1'' = lambda^3 / (2 pi c^2) d^2n/dlambda^2.
  double gvd_analytic() const;
  /// Five-point central difference of k_signal with step h (rad/s).
  double gvd_finite_difference(double h) const;

  /// Pump wave number k_0 for the requested tuning mode.
  double pump_wavenumber(const PumpMode& mode) const;
  /// Angle theta solving n_e(theta, lambda_0) omega_0 / c = 2 k_1(0).
  double phase_matching_angle() const;

  /// Signal index at degeneracy n_1(omega_1).
  double central_index() const;

 private:
  DispersionModel model_;
  FieldParams fields_;
  std::optional<double> gvd_override_;
};

}  // namespace twinbeam
