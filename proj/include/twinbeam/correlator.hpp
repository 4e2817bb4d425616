#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "twinbeam/fourier.hpp"
#include "twinbeam/parallel.hpp"
#include "twinbeam/phasematch.hpp"
#include "twinbeam/propagation.hpp"

namespace twinbeam {

enum class Reduction {
  radial,     // integrand depends on |q| only: d^2q -> 2 pi q dq (Hankel form)
  cartesian,  // full (q_x, q_y) square
};

// Sampling of the (q, Omega) integration domain.
//
// Radial rows are integrated in u = q^2 (Delta is nearly linear in u) with
// composite 8-point Gauss-Legendre panels; n_q is the total node count. The
// Omega axis is uniform with n_omega nodes so the FFT path applies.
struct Grid {
  double q_max = 4.0e5;       // rad/m
  std::size_t n_q = 256;
  double omega_max = 0.6e15;  // rad/s
  std::size_t n_omega = 1024;
  Reduction reduction = Reduction::radial;

  void validate(const Medium& medium) const;
  /// n_q and n_omega doubled, same extents.
  Grid refined() const;

  bool operator==(const Grid&) const = default;
};

/// Integrand of one Omega row: the admitted q interval and the mode function
/// at |q| (transverse kernel excluded).
struct RowIntegrand {
  QInterval support;
  std::function<complex(double q)> f;
};
using RowBuilder = std::function<RowIntegrand(double omega)>;

/// Omega axis for a grid, narrowed to a window's support when one is given.
OmegaAxis omega_axis(const Grid& grid, std::optional<double> support_half_width);

/// S(Omega_j) = integral d^2q/(2 pi)^2 exp(i q_x dx) f(|q|, Omega_j), restricted to
/// |q| <= q_max and the row support. Rows are independent and run in parallel.
Spectrum transverse_spectrum(const Grid& grid, const OmegaAxis& axis, double dx,
                             const RowBuilder& rows, const Executor& exec);

// Delay sweep of the coherent SFG peak intensity.
struct CorrelationProfile {
  std::vector<double> delays;     // s, strictly increasing
  std::vector<double> intensity;  // coherent + baseline, arbitrary units
  double baseline = 0.0;
  Grid grid_used;
  TransferSpec transfer_used;

  std::vector<double> normalized() const;
  double peak() const;
};

struct FftCheckReport {
  std::size_t fft_size = 0;
  double max_rel_deviation = 0.0;       // FFT vs direct, full F_PDC
  double box_fft_vs_analytic = 0.0;     // box spectrum, FFT path
  double box_direct_vs_analytic = 0.0;  // box spectrum, direct path (natural + sweep delays)

  bool passed() const {
    return max_rel_deviation < 1e-6 && box_fft_vs_analytic < 1e-9 &&
           box_direct_vs_analytic < 1e-9;
  }
};

struct ConvergenceReport {
  double max_rel_change = 0.0;  // max over delays of |I_fine - I| / I_fine
  bool converged = false;       // max_rel_change < 1e-3
};

class Correlator {
 public:
  Correlator(Crystal pdc, Crystal sfg, SincArgument sfg_sinc, Grid grid,
             Executor exec = Executor{1});

  const Crystal& pdc() const { return pdc_; }
  const Crystal& sfg() const { return sfg_; }
  const Grid& grid() const { return grid_; }
  SincArgument sfg_sinc() const { return sfg_sinc_; }
  const Executor& executor() const { return exec_; }

  /// Spectrum of F_PDC, optionally seen through the static part of a transfer path.
  Spectrum pdc_spectrum(double dx, const TransferSpec* path = nullptr) const;

  /// psi_PDC(dx, dt) = integral d^3w/(2 pi)^3 exp(i w . dxi) F_PDC(w).
  complex biphoton_correlation(double dx, double dt, const TransferSpec* path = nullptr) const;
  std::vector<complex> biphoton_correlation(double dx, std::span<const double> dts,
                                            const TransferSpec* path = nullptr) const;

  /// Omega samples of integral d^2q/(2 pi)^2 H_+H_-(w) F_PDC(w) F_SFG(-w) with the
  /// delay phase left out.
  Spectrum sfg_spectrum(const TransferSpec& spec) const;
  /// The same integrand for the ideal path (no transfer factor at all), limited
  /// to the window when given.
  Spectrum ideal_sfg_spectrum(const std::optional<SpectralWindow>& window) const;

  /// |integral d^3w/(2 pi)^3 H_+(w) H_-(-w) F_PDC(w) F_SFG(-w)|^2.
  double coherent_sfg_intensity(const TransferSpec& spec) const;
  /// Ideal-imaging form: delay phase on the bare F_PDC F_SFG integrand.
  double ideal_sfg_intensity(double delay, const std::optional<SpectralWindow>& window) const;

  /// coherent_sfg_intensity with each delay substituted into the template, plus baseline.
  CorrelationProfile delay_sweep(std::span<const double> delays, const TransferSpec& tmpl,
                                 double baseline = 0.0) const;

  /// FFT vs direct evaluation of psi_PDC(0, .) and both vs the analytic box transform.
  FftCheckReport fft_backend_check(std::size_t min_fft_size = 0) const;

  /// Re-run a sweep on the refined grid and report the largest relative change.
  ConvergenceReport grid_convergence(std::span<const double> delays,
                                     const TransferSpec& tmpl) const;

 private:
  Crystal pdc_;
  Crystal sfg_;
  SincArgument sfg_sinc_;
  Grid grid_;
  Executor exec_;
};

/// Delays from start to stop inclusive with a fixed step.
std::vector<double> delay_range(double start, double stop, double step);

}  // namespace twinbeam
