#include "doctest.h"

#include <cmath>
#include <limits>

#include "support.hpp"
#include "twinbeam/constants.hpp"
#include "twinbeam/errors.hpp"
#include "twinbeam/propagation.hpp"

using namespace twinbeam;
using tbtest::rel;

namespace golden {
constexpr double pinhole_half_angle_deg = 0.39513704250748830;  // atan(2 mm / 290 mm)
constexpr double effective_bandwidth = 2.0903772624517085e14;   // rad/s, BBO default
}  // namespace golden

TEST_CASE("identity path") {
  const TransferPath p(tbtest::bbo_medium(), TransferSpec{});
  tbtest::Gen gen(1);
  for (int i = 0; i < 100; ++i) {
    const SpectralMode w{gen.uniform(0.0, 1e6), gen.uniform(-1.5e15, 1.5e15)};
    CHECK(p.product(w) == complex(1.0, 0.0));
  }
}

TEST_CASE("pure delay") {
  TransferSpec s;
  s.delay = 7e-15;
  const TransferPath p(tbtest::bbo_medium(), s);
  const SpectralMode w{1e5, 0.3e15};
  CHECK(std::abs(p.product(w)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::arg(p.product(w)) == doctest::Approx(std::remainder(-0.3e15 * 7e-15, kTwoPi)));
  CHECK(p.static_product(w) == complex(1.0, 0.0));
}

TEST_CASE("defocus on the phase-matched locus is a quadratic chirp") {
  const auto m = tbtest::bbo_medium();
  TransferSpec s;
  s.defocus = 200e-6;
  const TransferPath literal(m, s);
  s.defocus_model = DefocusModel::chirp;
  const TransferPath chirp(m, s);
  const double k1 = m->k_signal(0.0), gvd = m->gvd_signal(), n1 = m->central_index();
  const double w1 = m->fields().central_frequency;
  for (double om : {0.05e15, 0.2e15, 0.45e15}) {
    const double q = std::sqrt(k1 * gvd) * om;
    const double expected = -om * om * gvd * n1 * s.defocus / (1.0 - om * om / (w1 * w1));
    CHECK(rel(literal.defocus_phase({q, om}), expected) < 1e-12);
    CHECK(rel(chirp.defocus_phase({12345.0, om}), expected) < 1e-12);
  }
}

TEST_CASE("domain and validation errors") {
  const auto m = tbtest::bbo_medium();
  const TransferPath p(m, TransferSpec{});
  CHECK_THROWS_AS(p.product({0.0, m->fields().central_frequency}), DomainError);
  TransferSpec bad;
  bad.window = SpectralWindow{-1.0};
  CHECK_THROWS_AS(bad.validate(), PreconditionError);
  bad = {};
  bad.pinhole_half_angle = kPi / 2;
  CHECK_THROWS_AS(bad.validate(), PreconditionError);
  bad = {};
  bad.amplitude_transmission = 1.5;
  CHECK_THROWS_AS(TransferPath(m, bad), PreconditionError);
  bad = {};
  bad.gap_q_min = -1.0;
  CHECK_THROWS_AS(bad.validate(), PreconditionError);
}

TEST_CASE("window shapes") {
  const SpectralWindow box{0.9e15};
  CHECK(box.value(0.45e15) == 1.0);
  CHECK(box.value(std::nextafter(0.45e15, 1e16)) == 0.0);
  CHECK(box.value(-0.2e15) == 1.0);
  const SpectralWindow soft{0.9e15, 0.1e15};
  CHECK(soft.value(0.4e15) == 1.0);
  CHECK(soft.value(0.45e15) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(soft.value(0.5e15) == 0.0);
  CHECK(soft.support_half_width() == 0.5e15);
}

TEST_CASE("pinhole and gap gates") {
  const auto m = tbtest::bbo_medium();
  TransferSpec s;
  s.pinhole_half_angle = 0.01;
  s.gap_q_min = 2e3;
  const TransferPath p(m, s);
  const double om = 0.1e15;
  const double q_hi = m->k_signal(om) * std::sin(0.01);
  CHECK(p.gate({q_hi * 0.999, om}) == 1.0);
  CHECK(p.gate({q_hi * 1.001, om}) == 0.0);
  CHECK(p.gate({1.9e3, om}) == 0.0);
  CHECK(p.q_support(om).lo == 2e3);
  CHECK(p.q_support(om).hi == q_hi);
  CHECK_FALSE(p.omega_support_half_width().has_value());
}

TEST_CASE("property: modulus is 0 or amplitude_transmission, static part is real without phases") {
  const auto m = tbtest::bbo_medium();
  tbtest::Gen gen(0x7a);
  for (int i = 0; i < 200; ++i) {
    TransferSpec s;
    s.amplitude_transmission = gen.uniform(0.0, 1.0);
    s.window = SpectralWindow{gen.uniform(0.2e15, 1.2e15)};
    s.pinhole_half_angle = gen.uniform(1e-3, 0.05);
    s.gap_q_min = gen.uniform(0.0, 1e4);
    const TransferPath still(m, s);
    s.delay = gen.uniform(-50e-15, 50e-15);
    s.defocus = gen.uniform(-500e-6, 500e-6);
    const TransferPath moving(m, s);
    TransferSpec back = s;
    back.delay = -s.delay;
    back.defocus = 0.0;
    TransferSpec fwd = back;
    fwd.delay = s.delay;
    const TransferPath pb(m, back), pf(m, fwd);
    for (int j = 0; j < 20; ++j) {
      const SpectralMode w{gen.uniform(0.0, 5e5), gen.uniform(-0.7e15, 0.7e15)};
      const double mod = std::abs(moving.product(w));
      const bool gated = mod == 0.0 || std::abs(mod - s.amplitude_transmission) < 1e-15;
      CHECK(gated);
      const complex st = still.product(w);
      CHECK(st.imag() == 0.0);
      CHECK(st.real() >= 0.0);
      CHECK(pf.product(w) == std::conj(pb.product(w)));
    }
  }
}

TEST_CASE("pinhole geometry") {
  const double a = pinhole_from_geometry(4e-3, 0.29);
  CHECK(rel(a * 180.0 / kPi, golden::pinhole_half_angle_deg) < 1e-14);
  CHECK(a == doctest::Approx(6.896e-3).epsilon(1e-3));
  CHECK(2.0 * a * 180.0 / kPi == doctest::Approx(0.79).epsilon(1e-3));
  CHECK(pinhole_from_geometry(2e-3, 0.29) == doctest::Approx(0.5 * a).epsilon(1e-4));
  CHECK_THROWS_AS(pinhole_from_geometry(std::numeric_limits<double>::infinity(), 0.29),
                  PreconditionError);
  CHECK_THROWS_AS(pinhole_from_geometry(0.0, 0.29), PreconditionError);
}

TEST_CASE("effective bandwidth") {
  const auto m = tbtest::bbo_medium();
  TransferSpec s;
  CHECK_THROWS_AS(effective_bandwidth(s, *m), PreconditionError);
  s.pinhole_half_angle = pinhole_from_geometry(4e-3, 0.29);
  CHECK(rel(effective_bandwidth(s, *m), golden::effective_bandwidth) < 1e-12);
  // Clipped by a narrower window.
  s.window = SpectralWindow{0.1e15};
  CHECK(effective_bandwidth(s, *m) == 0.1e15);
  s.window.reset();
  s.pinhole_half_angle = 1e-12;
  CHECK(effective_bandwidth(s, *m) < 1e5);

  const auto flat = tbtest::constant_medium(1.6);
  s.pinhole_half_angle = 0.01;
  CHECK_THROWS_AS(effective_bandwidth(s, *flat), DomainError);
}

TEST_CASE("property: effective bandwidth is nondecreasing in the pinhole angle") {
  const auto m = tbtest::bbo_medium();
  tbtest::Gen gen(0xeb);
  for (int i = 0; i < 200; ++i) {
    TransferSpec a, b;
    const double x = gen.uniform(1e-5, 0.05), y = gen.uniform(1e-5, 0.05);
    a.pinhole_half_angle = std::min(x, y);
    b.pinhole_half_angle = std::max(x, y);
    if (gen.sign() > 0) a.window = b.window = SpectralWindow{gen.uniform(0.1e15, 1e15)};
    CHECK(effective_bandwidth(a, *m) <= effective_bandwidth(b, *m));
  }
}
