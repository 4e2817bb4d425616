#include "twinbeam/experiments.hpp"

#include <algorithm>
#include <cmath>

#include "twinbeam/errors.hpp"

namespace twinbeam {

std::shared_ptr<const Medium> ScenarioConfig::medium() const {
  return std::make_shared<const Medium>(
      DispersionModel(ordinary, extraordinary, lambda_min, lambda_max),
      FieldParams::from_pump_wavelength(pump_wavelength), gvd_override);
}

Correlator ScenarioConfig::correlator() const {
  const auto m = medium();
  const Executor exec = workers > 0 ? Executor(workers) : Executor::from_environment();
  return Correlator(Crystal(m, pdc), Crystal(m, sfg), sfg_sinc, grid, exec);
}

std::vector<double> ScenarioConfig::delays() const {
  return delay_range(delay_start, delay_stop, delay_step);
}

double ScenarioConfig::pinhole_angle() const {
  return pinhole_half_angle ? *pinhole_half_angle
                            : pinhole_from_geometry(pinhole_diameter, pinhole_distance);
}

TransferSpec ScenarioConfig::base_transfer() const {
  TransferSpec t;
  if (use_window) t.window = window;
  t.gap_q_min = gap_q_min;
  t.amplitude_transmission = amplitude_transmission;
  t.defocus_model = defocus_model;
  return t;
}

ScenarioResult analyse_sweep(const std::string& name, const Correlator& correlator,
                             std::span<const double> delays, const TransferSpec& spec,
                             double baseline, const FitOptions& fit_options) {
  ScenarioResult r;
  r.name = name;
  r.profile = correlator.delay_sweep(delays, spec, baseline);
  r.peak_intensity = r.profile.peak() - baseline;
  r.fwhm = extract_fwhm(r.profile);
  r.fit = fit_sinc2(r.profile, fit_options);
  return r;
}

ScenarioResult scenario_fig2(const ScenarioConfig& config) {
  const Correlator c = config.correlator();
  return analyse_sweep("fig2", c, config.delays(), config.base_transfer(), config.baseline);
}

ScenarioResult scenario_fig3(const ScenarioConfig& config) {
  const Correlator c = config.correlator();
  TransferSpec spec = config.base_transfer();
  spec.pinhole_half_angle = config.pinhole_angle();
  ScenarioResult r = analyse_sweep("fig3", c, config.delays(), spec, config.baseline);
  r.effective_bandwidth = effective_bandwidth(spec, c.pdc().medium());
  return r;
}

std::vector<ScenarioResult> scenario_fig4(const ScenarioConfig& config) {
  if (config.defocus_list.empty()) throw PreconditionError("fig4 needs at least one defocus");
  const Correlator c = config.correlator();
  const auto delays = config.delays();
  std::vector<ScenarioResult> out;
  std::optional<double> shared_baseline;
  for (double dz : config.defocus_list) {
    TransferSpec spec = config.base_transfer();
    spec.defocus = dz;
    FitOptions fit;
    fit.fixed_baseline = shared_baseline;
    ScenarioResult r = analyse_sweep("fig4", c, delays, spec, config.baseline, fit);
    r.defocus = dz;
    if (!shared_baseline) shared_baseline = r.fit.baseline;
    out.push_back(std::move(r));
  }
  return out;
}

ScenarioResult scenario_sweep(const ScenarioConfig& config) {
  const Correlator c = config.correlator();
  TransferSpec spec = config.base_transfer();
  spec.defocus = config.defocus;
  if (config.sweep_uses_pinhole) spec.pinhole_half_angle = config.pinhole_angle();
  ScenarioResult r = analyse_sweep("sweep", c, config.delays(), spec, config.baseline);
  if (spec.pinhole_half_angle) r.effective_bandwidth = effective_bandwidth(spec, c.pdc().medium());
  if (spec.defocus != 0.0) r.defocus = spec.defocus;
  return r;
}

}  // namespace twinbeam
