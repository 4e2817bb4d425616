#include "twinbeam/correlator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>

#include "twinbeam/constants.hpp"
#include "twinbeam/errors.hpp"

namespace twinbeam {

namespace {

constexpr std::size_t kPanelOrder = 8;

struct Rule {
  std::array<double, kPanelOrder> x;
  std::array<double, kPanelOrder> w;
};

const Rule& gauss_rule() {
  static const Rule rule = [] {
    using G = boost::math::quadrature::gauss<double, kPanelOrder>;
    Rule r{};
    const auto& a = G::abscissa();
    const auto& wt = G::weights();
    std::size_t k = 0;
    for (std::size_t i = a.size(); i-- > 0;) {
      r.x[k] = -a[i];
      r.w[k++] = wt[i];
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
      r.x[k] = a[i];
      r.w[k++] = wt[i];
    }
    return r;
  }();
  return rule;
}

// Composite Gauss-Legendre nodes/weights on [a, b] with `panels` panels.
void panel_nodes(double a, double b, std::size_t panels, std::vector<double>& x,
                 std::vector<double>& w) {
  const Rule& r = gauss_rule();
  x.clear();
  w.clear();
  for (std::size_t p = 0; p < panels; ++p) {
    const double lo = a + (b - a) * static_cast<double>(p) / static_cast<double>(panels);
    const double hi = a + (b - a) * static_cast<double>(p + 1) / static_cast<double>(panels);
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    for (std::size_t i = 0; i < kPanelOrder; ++i) {
      x.push_back(mid + half * r.x[i]);
      w.push_back(half * r.w[i]);
    }
  }
}

std::size_t panel_count(std::size_t n_q) { return std::max<std::size_t>(1, n_q / kPanelOrder); }

complex radial_row(const Grid& grid, double dx, const RowIntegrand& row) {
  const double lo = std::max(0.0, row.support.lo);
  const double hi = std::min(grid.q_max, row.support.hi);
  if (!(hi > lo)) return 0.0;
  std::vector<double> u, w;
  panel_nodes(lo * lo, hi * hi, panel_count(grid.n_q), u, w);
  complex sum = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double q = std::sqrt(u[i]);
    complex v = row.f(q);
    if (dx != 0.0) v *= std::cyl_bessel_j(0.0, q * dx);
    sum += w[i] * v;
  }
  // q dq / (2 pi) = du / (4 pi)
  return sum / (2.0 * kTwoPi);
}

complex cartesian_row(const Grid& grid, double dx, const RowIntegrand& row) {
  const double lo = std::max(0.0, row.support.lo);
  const double hi = std::min(grid.q_max, row.support.hi);
  if (!(hi > lo)) return 0.0;
  std::vector<double> x, w;
  panel_nodes(-hi, hi, panel_count(grid.n_q), x, w);
  complex sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    complex line = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double q = std::hypot(x[i], x[j]);
      if (q < lo || q > hi) continue;
      line += w[j] * row.f(q);
    }
    if (dx != 0.0) line *= std::polar(1.0, x[i] * dx);
    sum += w[i] * line;
  }
  return sum / (kTwoPi * kTwoPi);
}

std::optional<double> window_half_width(const TransferSpec* spec) {
  if (!spec || !spec->window) return std::nullopt;
  return spec->window->support_half_width();
}

}  // namespace

void Grid::validate(const Medium& medium) const {
  if (n_q < 16 || n_omega < 16) throw PreconditionError("grid needs n_q, n_omega >= 16");
  if (!(q_max > 0.0)) throw PreconditionError("grid q_max must be positive");
  if (!(omega_max > 0.0)) throw PreconditionError("grid omega_max must be positive");
  const double w1 = medium.fields().central_frequency;
  if (!(omega_max < w1)) {
    throw PreconditionError("grid omega_max must stay below omega_1");
  }
  // k_signal is monotone in Omega for a normally dispersive medium; check the
  // extremes and the centre (also validates the dispersion range).
  const double k_min = std::min({medium.k_signal(-omega_max), medium.k_signal(0.0),
                                 medium.k_signal(omega_max)});
  if (!(q_max < k_min)) {
    std::ostringstream os;
    os.precision(9);
    os << "grid q_max = " << q_max << " rad/m reaches evanescent modes (k_1 min = " << k_min
       << " rad/m)";
    throw PreconditionError(os.str());
  }
}

Grid Grid::refined() const {
  Grid g = *this;
  g.n_q *= 2;
  g.n_omega *= 2;
  return g;
}

OmegaAxis omega_axis(const Grid& grid, std::optional<double> support_half_width) {
  const double half =
      support_half_width ? std::min(grid.omega_max, *support_half_width) : grid.omega_max;
  return {-half, half, grid.n_omega};
}

Spectrum transverse_spectrum(const Grid& grid, const OmegaAxis& axis, double dx,
                             const RowBuilder& rows, const Executor& exec) {
  if (axis.n < 2) throw PreconditionError("Omega axis needs at least two nodes");
  Spectrum s{axis, std::vector<complex>(axis.n)};
  exec.parallel_for(axis.n, [&](std::size_t j) {
    const RowIntegrand row = rows(axis.node(j));
    s.values[j] = grid.reduction == Reduction::radial ? radial_row(grid, dx, row)
                                                      : cartesian_row(grid, dx, row);
  });
  return s;
}

std::vector<double> CorrelationProfile::normalized() const {
  const double m = peak();
  std::vector<double> out(intensity.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = m > 0.0 ? intensity[i] / m : 0.0;
  return out;
}

double CorrelationProfile::peak() const {
  return intensity.empty() ? 0.0 : *std::max_element(intensity.begin(), intensity.end());
}

Correlator::Correlator(Crystal pdc, Crystal sfg, SincArgument sfg_sinc, Grid grid, Executor exec)
    : pdc_(std::move(pdc)),
      sfg_(std::move(sfg)),
      sfg_sinc_(sfg_sinc),
      grid_(grid),
      exec_(exec) {
  grid_.validate(pdc_.medium());
}

Spectrum Correlator::pdc_spectrum(double dx, const TransferSpec* path_spec) const {
  std::shared_ptr<const TransferPath> path;
  if (path_spec) path = std::make_shared<TransferPath>(pdc_.medium_ptr(), *path_spec);
  const double gain = pdc_.spec().gain;
  RowBuilder rows = [&](double omega) -> RowIntegrand {
    auto phase = std::make_shared<PhaseRow>(pdc_.row(omega));
    if (!path) {
      return {{0.0, std::numeric_limits<double>::infinity()},
              [phase, gain](double q) { return pdc_amplitude(gain, phase->delta(q)); }};
    }
    return {path->q_support(omega), [phase, gain, path, omega](double q) {
              const complex amp = pdc_amplitude(gain, phase->delta(q));
              return path->static_product({q, omega}) * amp;
            }};
  };
  return transverse_spectrum(grid_, omega_axis(grid_, window_half_width(path_spec)), dx, rows,
                             exec_);
}

complex Correlator::biphoton_correlation(double dx, double dt, const TransferSpec* path) const {
  return fourier_direct(pdc_spectrum(dx, path), dt);
}

std::vector<complex> Correlator::biphoton_correlation(double dx, std::span<const double> dts,
                                                      const TransferSpec* path) const {
  const Spectrum s = pdc_spectrum(dx, path);
  std::vector<complex> out(dts.size());
  exec_.parallel_for(dts.size(), [&](std::size_t i) { out[i] = fourier_direct(s, dts[i]); });
  return out;
}

Spectrum Correlator::sfg_spectrum(const TransferSpec& spec) const {
  auto path = std::make_shared<const TransferPath>(pdc_.medium_ptr(), spec);
  const double g_pdc = pdc_.spec().gain;
  const double g_sfg = sfg_.spec().gain;
  const SincArgument arg = sfg_sinc_;
  RowBuilder rows = [&](double omega) -> RowIntegrand {
    auto down = std::make_shared<PhaseRow>(pdc_.row(omega));
    // F_SFG is evaluated at -w: radial |q| is unchanged, Omega flips sign.
    auto up = std::make_shared<PhaseRow>(sfg_.row(-omega));
    return {path->q_support(omega), [=](double q) {
              const complex amp = pdc_amplitude(g_pdc, down->delta(q)) *
                                  sfg_amplitude(g_sfg, up->delta(q), arg);
              return path->static_product({q, omega}) * amp;
            }};
  };
  return transverse_spectrum(grid_, omega_axis(grid_, path->omega_support_half_width()), 0.0,
                             rows, exec_);
}

Spectrum Correlator::ideal_sfg_spectrum(const std::optional<SpectralWindow>& window) const {
  if (window && window->edge_width > 0.0) {
    throw PreconditionError("ideal-imaging path takes a hard box window only");
  }
  const double g_pdc = pdc_.spec().gain;
  const double g_sfg = sfg_.spec().gain;
  const SincArgument arg = sfg_sinc_;
  RowBuilder rows = [&](double omega) -> RowIntegrand {
    auto down = std::make_shared<PhaseRow>(pdc_.row(omega));
    auto up = std::make_shared<PhaseRow>(sfg_.row(-omega));
    return {{0.0, std::numeric_limits<double>::infinity()}, [=](double q) {
              return pdc_amplitude(g_pdc, down->delta(q)) *
                     sfg_amplitude(g_sfg, up->delta(q), arg);
            }};
  };
  std::optional<double> half;
  if (window) half = window->support_half_width();
  return transverse_spectrum(grid_, omega_axis(grid_, half), 0.0, rows, exec_);
}

double Correlator::coherent_sfg_intensity(const TransferSpec& spec) const {
  return std::norm(fourier_direct(sfg_spectrum(spec), -spec.delay));
}

double Correlator::ideal_sfg_intensity(double delay,
                                       const std::optional<SpectralWindow>& window) const {
  return std::norm(fourier_direct(ideal_sfg_spectrum(window), -delay));
}

CorrelationProfile Correlator::delay_sweep(std::span<const double> delays,
                                           const TransferSpec& tmpl, double baseline) const {
  if (delays.empty()) throw PreconditionError("delay sweep needs at least one delay");
  for (std::size_t i = 1; i < delays.size(); ++i) {
    if (!(delays[i] > delays[i - 1])) {
      throw PreconditionError("delays must be strictly increasing");
    }
  }
  if (!(baseline >= 0.0)) throw PreconditionError("baseline must be non-negative");
  // The delay phase is the only delay-dependent factor, so the transverse
  // integral is shared by every point.
  const Spectrum s = sfg_spectrum(tmpl);
  CorrelationProfile p;
  p.delays.assign(delays.begin(), delays.end());
  p.intensity.resize(delays.size());
  p.baseline = baseline;
  p.grid_used = grid_;
  p.transfer_used = tmpl;
  exec_.parallel_for(delays.size(), [&](std::size_t i) {
    p.intensity[i] = std::norm(fourier_direct(s, -delays[i])) + baseline;
  });
  return p;
}

FftCheckReport Correlator::fft_backend_check(std::size_t min_fft_size) const {
  FftCheckReport report;

  const Spectrum full = pdc_spectrum(0.0);
  const FourierSeries fft = fourier_fft(full, min_fft_size);
  report.fft_size = fft.delays.size();
  std::vector<complex> direct(fft.delays.size());
  exec_.parallel_for(direct.size(),
                     [&](std::size_t i) { direct[i] = fourier_direct(full, fft.delays[i]); });
  double scale = 0.0, dev = 0.0;
  for (std::size_t i = 0; i < direct.size(); ++i) {
    scale = std::max(scale, std::abs(direct[i]));
    dev = std::max(dev, std::abs(fft.values[i] - direct[i]));
  }
  report.max_rel_deviation = scale > 0.0 ? dev / scale : dev;

  // Box spectrum: q-independent unit amplitude over |Omega| <= omega_max.
  RowBuilder unit = [](double) -> RowIntegrand {
    return {{0.0, std::numeric_limits<double>::infinity()}, [](double) { return complex(1.0); }};
  };
  const Spectrum box = transverse_spectrum(grid_, omega_axis(grid_, std::nullopt), 0.0, unit,
                                           exec_);
  const double level = grid_.reduction == Reduction::radial
                           ? grid_.q_max * grid_.q_max / (2.0 * kTwoPi)
                           : box.values[0].real();
  const double a = grid_.omega_max;
  auto analytic = [&](double t) {
    return t == 0.0 ? level * a / kPi : level * std::sin(a * t) / (kPi * t);
  };
  const double box_scale = level * a / kPi;
  const FourierSeries box_fft = fourier_fft(box, min_fft_size);
  double dev_fft = 0.0, dev_direct = 0.0;
  for (std::size_t i = 0; i < box_fft.delays.size(); ++i) {
    const double t = box_fft.delays[i];
    dev_fft = std::max(dev_fft, std::abs(box_fft.values[i] - analytic(t)));
    dev_direct = std::max(dev_direct, std::abs(fourier_direct(box, t) - analytic(t)));
  }
  for (double t : delay_range(-60e-15, 60e-15, 0.5e-15)) {
    dev_direct = std::max(dev_direct, std::abs(fourier_direct(box, t) - analytic(t)));
  }
  report.box_fft_vs_analytic = dev_fft / box_scale;
  report.box_direct_vs_analytic = dev_direct / box_scale;
  return report;
}

ConvergenceReport Correlator::grid_convergence(std::span<const double> delays,
                                               const TransferSpec& tmpl) const {
  const Correlator fine(pdc_, sfg_, sfg_sinc_, grid_.refined(), exec_);
  const auto coarse_p = delay_sweep(delays, tmpl);
  const auto fine_p = fine.delay_sweep(delays, tmpl);
  ConvergenceReport r;
  for (std::size_t i = 0; i < delays.size(); ++i) {
    const double f = fine_p.intensity[i];
    const double change = std::abs(f - coarse_p.intensity[i]);
    if (f > 0.0) {
      r.max_rel_change = std::max(r.max_rel_change, change / f);
    } else if (change > 0.0) {
      r.max_rel_change = std::numeric_limits<double>::infinity();
    }
  }
  r.converged = r.max_rel_change < 1e-3;
  return r;
}

std::vector<double> delay_range(double start, double stop, double step) {
  if (!(step > 0.0) || !(stop >= start)) {
    throw PreconditionError("delay range needs step > 0 and stop >= start");
  }
  const auto n = static_cast<std::size_t>(std::llround((stop - start) / step)) + 1;
  if (n == 1) return {start};
  // Interpolate between the end points so symmetric sweeps stay exactly
  // symmetric and hit zero; snap to stop when it lies on the grid.
  const double m = static_cast<double>(n - 1);
  double end = start + m * step;
  if (std::abs(end - stop) <= 1e-9 * step) end = stop;
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double f = static_cast<double>(i);
    out[i] = (start * (m - f) + end * f) / m;
  }
  return out;
}

}  // namespace twinbeam
