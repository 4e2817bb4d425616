#include "twinbeam/run.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <system_error>

#include "json.hpp"

#include "twinbeam/constants.hpp"

namespace twinbeam {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Round to 9 significant digits so JSON matches the CSV precision.
double round9(double v) {
  const std::string s = format_sig9(v);
  double out = 0.0;
  std::from_chars(s.data(), s.data() + s.size(), out);
  return out;
}

json result_json(const ScenarioResult& r, const std::string& file,
                 const ConvergenceReport& conv) {
  json j;
  j["profile"] = file;
  j["fwhm_fs"] = round9(r.fwhm * 1e15);
  j["fit"] = {{"amplitude", round9(r.fit.amplitude)},
              {"width_rad_per_s", round9(r.fit.width)},
              {"center_fs", round9(r.fit.center * 1e15)},
              {"baseline", round9(r.fit.baseline)},
              {"fwhm_fs", round9(kSinc2TimeBandwidth / r.fit.width * 1e15)},
              {"iterations", r.fit.iterations}};
  j["residual"] = round9(r.fit.residual_norm);
  j["peak_intensity"] = round9(r.peak_intensity);
  j["effective_bandwidth_rad_per_s"] =
      r.effective_bandwidth ? json(round9(*r.effective_bandwidth)) : json(nullptr);
  if (r.defocus) j["defocus_um"] = round9(*r.defocus * 1e6);
  j["grid_max_rel_change"] = round9(conv.max_rel_change);
  j["grid_converged"] = conv.converged;
  return j;
}

std::string defocus_file(double dz) {
  return "profile_dz" + std::to_string(static_cast<long long>(std::llround(dz * 1e6))) + "um.csv";
}

std::vector<ScenarioResult> run_scenario(const RunConfig& config) {
  switch (config.scenario) {
    case Scenario::fig2: return {scenario_fig2(config.physics)};
    case Scenario::fig3: return {scenario_fig3(config.physics)};
    case Scenario::fig4: return scenario_fig4(config.physics);
    case Scenario::sweep: return {scenario_sweep(config.physics)};
  }
  return {};
}

// The transfer spec each scenario sweeps first.
TransferSpec scenario_transfer(const RunConfig& config) {
  const ScenarioConfig& p = config.physics;
  TransferSpec t = p.base_transfer();
  switch (config.scenario) {
    case Scenario::fig2: break;
    case Scenario::fig3: t.pinhole_half_angle = p.pinhole_angle(); break;
    case Scenario::fig4: t.defocus = p.defocus_list.front(); break;
    case Scenario::sweep:
      t.defocus = p.defocus;
      if (p.sweep_uses_pinhole) t.pinhole_half_angle = p.pinhole_angle();
      break;
  }
  return t;
}

}  // namespace

std::string format_sig9(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 9);
  return std::string(buf, res.ptr);
}

void write_atomically(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw OutputError("cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) {
      out.close();
      std::error_code ec;
      fs::remove(tmp, ec);
      throw OutputError("write failed for '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignored;
    fs::remove(tmp, ignored);
    throw OutputError("cannot rename to '" + path.string() + "': " + ec.message());
  }
}

std::string profile_csv(const CorrelationProfile& profile) {
  const auto norm = profile.normalized();
  std::string out = "delay_fs,intensity,intensity_normalized\n";
  for (std::size_t i = 0; i < profile.delays.size(); ++i) {
    out += format_sig9(profile.delays[i] * 1e15);
    out += ',';
    out += format_sig9(profile.intensity[i]);
    out += ',';
    out += format_sig9(norm[i]);
    out += '\n';
  }
  return out;
}

RunSummary run(const RunConfig& config, std::ostream& log) {
  const fs::path dir(config.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw OutputError("cannot create output directory '" + dir.string() + "'" +
                      (ec ? ": " + ec.message() : ""));
  }

  RunSummary summary;
  log << "scenario " << scenario_name(config.scenario) << '\n';
  summary.results = run_scenario(config);

  // Each result is re-run on the doubled grid; the flag reports the worst.
  const Correlator c = config.physics.correlator();
  std::vector<ConvergenceReport> conv;
  for (const auto& r : summary.results) {
    conv.push_back(c.grid_convergence(r.profile.delays, r.profile.transfer_used));
    summary.convergence.max_rel_change =
        std::max(summary.convergence.max_rel_change, conv.back().max_rel_change);
  }
  summary.convergence.converged = summary.convergence.max_rel_change < 1e-3;

  json j;
  j["scenario"] = scenario_name(config.scenario);
  j["grid_converged"] = summary.convergence.converged;
  j["grid_max_rel_change"] = round9(summary.convergence.max_rel_change);
  j["results"] = json::array();
  for (std::size_t i = 0; i < summary.results.size(); ++i) {
    const auto& r = summary.results[i];
    const std::string file = config.scenario == Scenario::fig4 && r.defocus
                                 ? defocus_file(*r.defocus)
                                 : std::string("profile.csv");
    write_atomically(dir / file, profile_csv(r.profile));
    summary.files.push_back(dir / file);
    j["results"].push_back(result_json(r, file, conv[i]));
    log << file << ": fwhm " << format_sig9(r.fwhm * 1e15) << " fs, fit width "
        << format_sig9(r.fit.width) << " rad/s, peak " << format_sig9(r.peak_intensity);
    if (r.effective_bandwidth) {
      log << ", effective bandwidth " << format_sig9(*r.effective_bandwidth) << " rad/s";
    }
    log << '\n';
  }
  // Single-result scenarios also expose the fields at top level.
  if (summary.results.size() == 1) {
    for (const auto& [k, v] : j["results"][0].items()) {
      if (!j.contains(k)) j[k] = v;
    }
  }
  write_atomically(dir / "summary.json", j.dump(2) + "\n");
  summary.files.push_back(dir / "summary.json");
  write_atomically(dir / "effective.cfg", echo_config(config));
  summary.files.push_back(dir / "effective.cfg");
  log << "grid doubling max relative change " << format_sig9(summary.convergence.max_rel_change)
      << (summary.convergence.converged ? " (converged)" : " (NOT converged)") << '\n';
  return summary;
}

bool grid_check(const RunConfig& config, std::ostream& out) {
  const Correlator c = config.physics.correlator();
  const FftCheckReport fft = c.fft_backend_check();
  out << "fft size                      " << fft.fft_size << '\n'
      << "fft vs direct (max rel)       " << format_sig9(fft.max_rel_deviation) << '\n'
      << "box, fft vs analytic          " << format_sig9(fft.box_fft_vs_analytic) << '\n'
      << "box, direct vs analytic       " << format_sig9(fft.box_direct_vs_analytic) << '\n'
      << "fft check                     " << (fft.passed() ? "ok" : "FAILED") << '\n';
  const ConvergenceReport conv =
      c.grid_convergence(config.physics.delays(), scenario_transfer(config));
  out << "grid doubling (max rel)       " << format_sig9(conv.max_rel_change) << '\n'
      << "grid convergence              " << (conv.converged ? "ok" : "FAILED") << '\n';
  return fft.passed() && conv.converged;
}

}  // namespace twinbeam
