#include "twinbeam/dispersion.hpp"

#include <cmath>
#include <sstream>

#include <boost/math/tools/roots.hpp>

#include "twinbeam/constants.hpp"
#include "twinbeam/errors.hpp"

namespace twinbeam {

namespace {

constexpr double kMetresPerMicron = 1e-6;

// n^2 and its first two derivatives with respect to lambda (lambda in um).
struct IndexSquared {
  double f, df, d2f;
};

IndexSquared evaluate(const SellmeierTerms& t, double lambda_um) {
  const double l2 = lambda_um * lambda_um;
  IndexSquared out{t.a - t.d * l2, -2.0 * t.d * lambda_um, -2.0 * t.d};
  for (std::size_t i = 0; i < t.b.size(); ++i) {
    // b l^2/(l^2-c) = b + b c/(l^2-c)
    const double bc = t.b[i] * t.c[i];
    const double den = l2 - t.c[i];
    out.f += t.b[i] + bc / den;
    out.df += -2.0 * bc * lambda_um / (den * den);
    out.d2f += -2.0 * bc / (den * den) + 8.0 * bc * l2 / (den * den * den);
  }
  return out;
}

void validate_terms(const SellmeierTerms& t, const char* name) {
  if (t.b.size() != t.c.size()) {
    throw PreconditionError(std::string(name) + " Sellmeier terms: b and c lists differ in length");
  }
}

}  // namespace

DispersionModel::DispersionModel(SellmeierTerms ordinary, SellmeierTerms extraordinary,
                                 double lambda_min, double lambda_max)
    : ordinary_(std::move(ordinary)),
      extraordinary_(std::move(extraordinary)),
      lambda_min_(lambda_min),
      lambda_max_(lambda_max) {
  validate_terms(ordinary_, "ordinary");
  validate_terms(extraordinary_, "extraordinary");
  if (!(lambda_min > 0.0 && lambda_max > lambda_min)) {
    throw PreconditionError("dispersion validity range must satisfy 0 < min < max");
  }
  // Every Sellmeier pole must lie outside the validity interval.
  for (const auto* t : {&ordinary_, &extraordinary_}) {
    for (double c : t->c) {
      const double lo = lambda_min / kMetresPerMicron;
      const double hi = lambda_max / kMetresPerMicron;
      if (c > lo * lo && c < hi * hi) {
        throw PreconditionError("Sellmeier pole inside the validity range");
      }
    }
  }
}

DispersionModel DispersionModel::bbo() {
  SellmeierTerms o{1.0, {0.90291, 0.83155, 0.76536}, {0.003926, 0.018786, 60.01}, 0.0};
  SellmeierTerms e{1.0, {1.151075, 0.21803, 0.656}, {0.007142, 0.02259, 263.0}, 0.0};
  return DispersionModel(o, e, 0.188e-6, 5.2e-6);
}

DispersionModel DispersionModel::constant(double index, double lambda_min, double lambda_max) {
  SellmeierTerms t{index * index, {}, {}, 0.0};
  return DispersionModel(t, t, lambda_min, lambda_max);
}

void DispersionModel::check_range(double lambda) const {
  if (lambda < lambda_min_) {
    std::ostringstream os;
    os.precision(9);
    os << "wavelength " << lambda << " m below dispersion model minimum " << lambda_min_ << " m";
    throw RangeError(os.str());
  }
  if (lambda > lambda_max_ || !std::isfinite(lambda)) {
    std::ostringstream os;
    os.precision(9);
    os << "wavelength " << lambda << " m above dispersion model maximum " << lambda_max_ << " m";
    throw RangeError(os.str());
  }
}

double DispersionModel::refractive_index(double lambda, Polarization pol) const {
  check_range(lambda);
  const auto v = evaluate(terms(pol), lambda / kMetresPerMicron);
  if (!(v.f > 1.0)) {
    throw RangeError("Sellmeier model yields n <= 1 inside its validity range");
  }
  return std::sqrt(v.f);
}

double DispersionModel::index_derivative(double lambda, Polarization pol) const {
  check_range(lambda);
  const auto v = evaluate(terms(pol), lambda / kMetresPerMicron);
  const double n = std::sqrt(v.f);
  return v.df / (2.0 * n) / kMetresPerMicron;
}

double DispersionModel::index_second_derivative(double lambda, Polarization pol) const {
  check_range(lambda);
  const auto v = evaluate(terms(pol), lambda / kMetresPerMicron);
  const double n = std::sqrt(v.f);
  const double dn = v.df / (2.0 * n);
  // 2 n n'' + 2 n'^2 = f''
  const double d2n = (v.d2f - 2.0 * dn * dn) / (2.0 * n);
  return d2n / (kMetresPerMicron * kMetresPerMicron);
}

double DispersionModel::extraordinary_index_at_angle(double lambda, double theta) const {
  const double no = refractive_index(lambda, Polarization::ordinary);
  const double ne = refractive_index(lambda, Polarization::extraordinary);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return 1.0 / std::sqrt(c * c / (no * no) + s * s / (ne * ne));
}

FieldParams FieldParams::from_pump_wavelength(double lambda0) {
  if (!(lambda0 > 0.0)) throw PreconditionError("pump wavelength must be positive");
  const double w0 = kTwoPi * kSpeedOfLight / lambda0;
  return {lambda0, w0, 0.5 * w0};
}

Medium::Medium(DispersionModel model, FieldParams fields, std::optional<double> gvd_override)
    : model_(std::move(model)), fields_(fields), gvd_override_(gvd_override) {}

double Medium::k_signal(double omega) const {
  const double w = fields_.central_frequency + omega;
  if (!(w > 0.0)) {
    throw RangeError("signal frequency omega_1 + Omega must be positive");
  }
  const double lambda = kTwoPi * kSpeedOfLight / w;
  return model_.refractive_index(lambda, Polarization::ordinary) * w / kSpeedOfLight;
}

double Medium::k_z(double q, double omega) const {
  if (q < 0.0) throw PreconditionError("k_z requires q >= 0");
  const double k = k_signal(omega);
  if (q > k) {
    std::ostringstream os;
    os.precision(9);
    os << "evanescent mode: q = " << q << " rad/m exceeds k_1(Omega) = " << k << " rad/m";
    throw EvanescentModeError(os.str());
  }
  return std::sqrt((k - q) * (k + q));
}

double Medium::k_z_shift(double q, double k) const {
  if (q > k) {
    std::ostringstream os;
    os.precision(9);
    os << "evanescent mode: q = " << q << " rad/m exceeds k_1(Omega) = " << k << " rad/m";
    throw EvanescentModeError(os.str());
  }
  const double kz = std::sqrt((k - q) * (k + q));
  return -q * q / (kz + k);
}

double Medium::gvd_signal() const {
  return gvd_override_ ? *gvd_override_ : gvd_analytic();
}

double Medium::gvd_analytic() const {
  const double lambda = kTwoPi * kSpeedOfLight / fields_.central_frequency;
  const double d2n = model_.index_second_derivative(lambda, Polarization::ordinary);
  return lambda * lambda * lambda / (kTwoPi * kSpeedOfLight * kSpeedOfLight) * d2n;
}

double Medium::gvd_finite_difference(double h) const {
  const double k0 = k_signal(0.0);
  const double kp1 = k_signal(h), km1 = k_signal(-h);
  const double kp2 = k_signal(2.0 * h), km2 = k_signal(-2.0 * h);
  return (-kp2 + 16.0 * kp1 - 30.0 * k0 + 16.0 * km1 - km2) / (12.0 * h * h);
}

double Medium::pump_wavenumber(const PumpMode& mode) const {
  if (std::holds_alternative<TunedPump>(mode)) {
    return 2.0 * k_signal(0.0);
  }
  const double theta = std::get<AngleTunedPump>(mode).theta;
  return model_.extraordinary_index_at_angle(fields_.pump_wavelength, theta) *
         fields_.pump_frequency / kSpeedOfLight;
}

double Medium::phase_matching_angle() const {
  const double target = 2.0 * k_signal(0.0) * kSpeedOfLight / fields_.pump_frequency;
  const double lambda0 = fields_.pump_wavelength;
  const double at_axis = model_.extraordinary_index_at_angle(lambda0, 0.0);
  const double at_normal = model_.extraordinary_index_at_angle(lambda0, kPi / 2.0);
  if ((at_axis - target) * (at_normal - target) > 0.0) {
    throw DomainError("no real phase-matching angle: required index outside [n_e, n_o] at pump");
  }
  auto residual = [&](double theta) {
    return model_.extraordinary_index_at_angle(lambda0, theta) - target;
  };
  boost::uintmax_t max_iter = 200;
  const auto [lo, hi] = boost::math::tools::toms748_solve(
      residual, 0.0, kPi / 2.0, boost::math::tools::eps_tolerance<double>(52), max_iter);
  return 0.5 * (lo + hi);
}

double Medium::central_index() const {
  return model_.refractive_index(fields_.pump_wavelength * 2.0, Polarization::ordinary);
}

}  // namespace twinbeam
