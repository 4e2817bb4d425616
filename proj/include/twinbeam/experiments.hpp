#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "twinbeam/correlator.hpp"
#include "twinbeam/dispersion.hpp"
#include "twinbeam/phasematch.hpp"
#include "twinbeam/propagation.hpp"

namespace twinbeam {

/// A profile that cannot be analysed (flat, peak at the sweep edge, too short).
class AnalysisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// sinc^2 fit: amplitude * sinc^2(width (t - center) / 2) + baseline.
struct Sinc2Fit {
  double amplitude = 0.0;
  double width = 0.0;   // rad/s
  double center = 0.0;  // s
  double baseline = 0.0;
  double residual_norm = 0.0;
  int iterations = 0;

  double operator()(double t) const;
};

/// Thrown when the minimizer hits its iteration cap; carries the best iterate.
class FitError : public std::runtime_error {
 public:
  FitError(const std::string& what, Sinc2Fit best) : std::runtime_error(what), best_(best) {}
  const Sinc2Fit& best() const { return best_; }

 private:
  Sinc2Fit best_;
};

struct FitOptions {
  int max_iterations = 200;
  std::optional<double> fixed_baseline;  // hold the baseline instead of fitting it
};

/// Full width at baseline + (max - baseline)/2, from linear interpolation of the
/// two crossings bracketing the maximum.
double extract_fwhm(std::span<const double> delays, std::span<const double> intensity,
                    double baseline);
double extract_fwhm(const CorrelationProfile& profile);

/// Levenberg-Marquardt least squares over {amplitude, width, center, baseline}.
/// Initial guess: amplitude = max - min, width = 4 x_half / FWHM_crude,
/// center = argmax, baseline = min.
Sinc2Fit fit_sinc2(std::span<const double> delays, std::span<const double> intensity,
                   const FitOptions& options = {});
Sinc2Fit fit_sinc2(const CorrelationProfile& profile, const FitOptions& options = {});

// Physical set-up shared by all scenarios. Defaults describe the twin-beam
// experiment: 527.5 nm pump, two identical 4 mm BBO crystals, a 0.9e15 rad/s
// transmission window, a 4 mm pinhole at 29 cm.
struct ScenarioConfig {
  SellmeierTerms ordinary = DispersionModel::bbo().terms(Polarization::ordinary);
  SellmeierTerms extraordinary = DispersionModel::bbo().terms(Polarization::extraordinary);
  double lambda_min = 0.188e-6;
  double lambda_max = 5.2e-6;
  std::optional<double> gvd_override;
  double pump_wavelength = 527.5e-9;

  CrystalSpec pdc{4e-3, 0.01, TunedPump{}, 0.0};
  CrystalSpec sfg{4e-3, 0.01, TunedPump{}, 0.0};
  SincArgument sfg_sinc = SincArgument::full;

  SpectralWindow window{0.9e15, 0.0};
  bool use_window = true;
  double pinhole_diameter = 4e-3;
  double pinhole_distance = 0.29;
  std::optional<double> pinhole_half_angle;  // overrides the geometry when set
  bool sweep_uses_pinhole = false;           // ad-hoc sweep scenario only
  double defocus = 0.0;                      // ad-hoc sweep scenario only
  DefocusModel defocus_model = DefocusModel::literal;
  std::vector<double> defocus_list{0.0, 100e-6, 200e-6, 400e-6};
  double gap_q_min = 0.0;
  double amplitude_transmission = 1.0;

  double delay_start = -60e-15;
  double delay_stop = 60e-15;
  double delay_step = 0.5e-15;
  double baseline = 0.0;

  Grid grid;
  unsigned workers = 0;  // 0: TWINBEAM_WORKERS or hardware concurrency

  std::shared_ptr<const Medium> medium() const;
  Correlator correlator() const;
  std::vector<double> delays() const;
  double pinhole_angle() const;
  /// Window, gap and transmission; no pinhole, no defocus.
  TransferSpec base_transfer() const;

  bool operator==(const ScenarioConfig&) const = default;
};

struct ScenarioResult {
  std::string name;
  CorrelationProfile profile;
  double fwhm = 0.0;  // s
  Sinc2Fit fit;
  double peak_intensity = 0.0;  // coherent peak above baseline
  std::optional<double> effective_bandwidth;  // rad/s, pinhole scenarios
  std::optional<double> defocus;              // m, defocus scenarios
};

/// Sweep + FWHM + sinc^2 fit for one transfer spec.
ScenarioResult analyse_sweep(const std::string& name, const Correlator& correlator,
                             std::span<const double> delays, const TransferSpec& spec,
                             double baseline, const FitOptions& fit_options = {});

/// Ideal imaging through the transmission window.
ScenarioResult scenario_fig2(const ScenarioConfig& config);
/// Ideal imaging with the far-field pinhole.
ScenarioResult scenario_fig3(const ScenarioConfig& config);
/// One sweep per imaging defocus; the fit baseline of the first entry is shared.
std::vector<ScenarioResult> scenario_fig4(const ScenarioConfig& config);
/// Ad-hoc sweep of the configured transfer section.
ScenarioResult scenario_sweep(const ScenarioConfig& config);

}  // namespace twinbeam
