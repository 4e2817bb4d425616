#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "support.hpp"
#include "twinbeam/constants.hpp"
#include "twinbeam/errors.hpp"
#include "twinbeam/experiments.hpp"

using namespace twinbeam;
using tbtest::rel;

namespace {

const ScenarioResult& fig2() {
  static const ScenarioResult r = scenario_fig2(ScenarioConfig{});
  return r;
}

const std::vector<ScenarioResult>& fig4() {
  static const std::vector<ScenarioResult> r = scenario_fig4(ScenarioConfig{});
  return r;
}

ScenarioResult with_window(double width) {
  ScenarioConfig c;
  c.window = SpectralWindow{width};
  return scenario_fig2(c);
}

}  // namespace

TEST_CASE("fig2: sinc^2 fit recovers the window width") {
  const ScenarioResult& r = fig2();
  CHECK(r.name == "fig2");
  CHECK(r.profile.delays.size() == 241);
  CHECK(rel(r.fit.width, 0.9e15) < 0.05);
  CHECK(std::abs(r.fwhm - 6.2e-15) < 0.3e-15);
  CHECK(r.peak_intensity > 0.0);
  CHECK_FALSE(r.effective_bandwidth.has_value());
  CHECK_FALSE(r.defocus.has_value());
}

TEST_CASE("time-bandwidth product over a window sweep") {
  std::vector<double> fwhm;
  for (double w : {0.3e15, 0.4e15, 0.5e15, 0.7e15, 0.9e15}) {
    const ScenarioResult r = with_window(w);
    fwhm.push_back(r.fwhm);
    CHECK(rel(r.fwhm * w, kSinc2TimeBandwidth) < 0.02);
  }
  CHECK(std::is_sorted(fwhm.rbegin(), fwhm.rend()));
  // Halving the window doubles the width.
  CHECK(rel(with_window(0.45e15).fwhm, 2.0 * fig2().fwhm) < 0.05);
}

TEST_CASE("fig3: the pinhole narrows the bandwidth") {
  const ScenarioResult r = scenario_fig3(ScenarioConfig{});
  REQUIRE(r.effective_bandwidth.has_value());
  CHECK(*r.effective_bandwidth < 0.9e15);
  CHECK(r.fwhm > fig2().fwhm);
  // The profile follows the effective bandwidth to within the sinc^2 relation.
  CHECK(rel(r.fwhm, kSinc2TimeBandwidth / *r.effective_bandwidth) < 0.15);
  CHECK(r.peak_intensity < fig2().peak_intensity);
}

TEST_CASE("fig3: a pinhole open beyond the grid reproduces fig2") {
  ScenarioConfig c;
  c.pinhole_half_angle = 0.3;  // k_1 sin(0.3) is far beyond q_max
  const ScenarioResult r = scenario_fig3(c);
  for (std::size_t i = 0; i < r.profile.intensity.size(); ++i) {
    CHECK(rel(r.profile.intensity[i], fig2().profile.intensity[i]) < 1e-12);
  }
}

TEST_CASE("fig4: defocus broadens and dims the correlation") {
  const auto& r = fig4();
  REQUIRE(r.size() == 4);
  CHECK(r[0].profile.intensity == fig2().profile.intensity);
  CHECK(r[0].fwhm == fig2().fwhm);
  CHECK(r[0].fit.width == fig2().fit.width);
  for (std::size_t i = 1; i < r.size(); ++i) {
    CHECK(r[i].fwhm >= r[i - 1].fwhm);
    CHECK(r[i].peak_intensity < r[i - 1].peak_intensity);
    CHECK(r[i].fit.baseline == r[0].fit.baseline);
    REQUIRE(r[i].defocus.has_value());
  }
  CHECK(*r[3].defocus == 400e-6);
}

TEST_CASE("fig4: chirp substitution tracks the literal defocus phase") {
  ScenarioConfig c;
  c.defocus_model = DefocusModel::chirp;
  const auto chirp = scenario_fig4(c);
  for (std::size_t i = 0; i < chirp.size(); ++i) {
    CHECK(rel(chirp[i].fwhm, fig4()[i].fwhm) < 0.10);
  }
}

TEST_CASE("fig4: empty defocus list is rejected") {
  ScenarioConfig c;
  c.defocus_list.clear();
  CHECK_THROWS_AS(scenario_fig4(c), PreconditionError);
}

TEST_CASE("sweep scenario") {
  ScenarioConfig c;
  c.defocus = 100e-6;
  const ScenarioResult r = scenario_sweep(c);
  CHECK(r.name == "sweep");
  REQUIRE(r.defocus.has_value());
  CHECK(r.profile.intensity == fig4()[1].profile.intensity);
  c.defocus = 0.0;
  c.sweep_uses_pinhole = true;
  CHECK(scenario_sweep(c).effective_bandwidth.has_value());
}

TEST_CASE("baseline is added, not fitted away") {
  ScenarioConfig c;
  c.baseline = 0.3 * fig2().peak_intensity;
  const ScenarioResult r = scenario_fig2(c);
  CHECK(rel(r.peak_intensity, fig2().peak_intensity) < 1e-12);
  CHECK(rel(r.fwhm, fig2().fwhm) < 1e-9);
  CHECK(rel(r.fit.width, fig2().fit.width) < 1e-3);
}

TEST_CASE("scenarios are deterministic across worker counts") {
  ScenarioConfig c;
  c.workers = 1;
  const ScenarioResult a = scenario_fig2(c);
  c.workers = 5;
  const ScenarioResult b = scenario_fig2(c);
  CHECK(a.profile.intensity == b.profile.intensity);
  CHECK(a.profile.intensity == fig2().profile.intensity);
  CHECK(a.fit.width == b.fit.width);
}
