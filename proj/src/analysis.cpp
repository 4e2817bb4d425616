#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Dense>

#include "twinbeam/constants.hpp"
#include "twinbeam/experiments.hpp"

namespace twinbeam {

namespace {

// Internal fit units: delays in fs, width in rad/fs, intensities scaled to O(1).
constexpr double kTimeUnit = 1e-15;

struct Sinc2Eval {
  double s;   // sinc(x)
  double ds;  // d sinc / dx
};

Sinc2Eval sinc_and_derivative(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return {1.0 - x2 / 6.0, -x / 3.0 + x * x2 / 30.0};
  }
  const double s = std::sin(x) / x;
  return {s, (std::cos(x) - s) / x};
}

void check_lengths(std::span<const double> t, std::span<const double> y) {
  if (t.size() != y.size()) throw AnalysisError("delay and intensity lengths differ");
}

}  // namespace

double Sinc2Fit::operator()(double t) const {
  const double s = sinc(0.5 * width * (t - center));
  return amplitude * s * s + baseline;
}

double extract_fwhm(std::span<const double> delays, std::span<const double> intensity,
                    double baseline) {
  check_lengths(delays, intensity);
  const std::size_t n = intensity.size();
  if (n < 5) throw AnalysisError("FWHM needs at least 5 points");
  const auto it = std::max_element(intensity.begin(), intensity.end());
  const std::size_t m = static_cast<std::size_t>(it - intensity.begin());
  const double peak = *it;
  if (!(peak > baseline) ||
      *std::min_element(intensity.begin(), intensity.end()) == peak) {
    throw AnalysisError("profile has no maximum above its baseline");
  }
  if (m == 0 || m + 1 == n) throw AnalysisError("maximum at sweep edge; FWHM unreliable");
  const double half = baseline + 0.5 * (peak - baseline);

  std::size_t r = m;
  while (r < n && intensity[r] >= half) ++r;
  if (r == n) throw AnalysisError("profile does not fall to half maximum after the peak");
  std::size_t l = m;
  while (l > 0 && intensity[l] >= half) --l;
  if (intensity[l] >= half) {
    throw AnalysisError("profile does not fall to half maximum before the peak");
  }
  auto cross = [&](std::size_t a, std::size_t b) {
    const double f = (half - intensity[a]) / (intensity[b] - intensity[a]);
    return delays[a] + f * (delays[b] - delays[a]);
  };
  return cross(r - 1, r) - cross(l, l + 1);
}

double extract_fwhm(const CorrelationProfile& profile) {
  return extract_fwhm(profile.delays, profile.intensity, profile.baseline);
}

Sinc2Fit fit_sinc2(std::span<const double> delays, std::span<const double> intensity,
                   const FitOptions& options) {
  check_lengths(delays, intensity);
  const std::size_t n = delays.size();
  if (n < 8) throw AnalysisError("sinc^2 fit needs at least 8 points");

  const auto [mn, mx] = std::minmax_element(intensity.begin(), intensity.end());
  const double y_min = *mn, y_max = *mx;
  const double scale = std::max(std::abs(y_max), std::abs(y_min));
  if (!(y_max > y_min) || !(scale > 0.0)) throw AnalysisError("cannot fit a flat profile");

  // Initial guess.
  const double base0 = options.fixed_baseline.value_or(y_min);
  double width0;
  try {
    width0 = kSinc2TimeBandwidth / (extract_fwhm(delays, intensity, base0) / kTimeUnit);
  } catch (const AnalysisError&) {
    width0 = 4.0 * kSinc2TimeBandwidth / ((delays.back() - delays.front()) / kTimeUnit);
  }
  const bool free_baseline = !options.fixed_baseline;
  const int np = free_baseline ? 4 : 3;

  Eigen::VectorXd t(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    t[static_cast<Eigen::Index>(i)] = delays[i] / kTimeUnit;
    y[static_cast<Eigen::Index>(i)] = intensity[i] / scale;
  }
  Eigen::Vector4d p((y_max - base0) / scale, width0,
                    delays[static_cast<std::size_t>(mx - intensity.begin())] / kTimeUnit,
                    base0 / scale);

  auto residuals = [&](const Eigen::Vector4d& par, Eigen::VectorXd& r, Eigen::MatrixXd* jac) {
    r.resize(static_cast<Eigen::Index>(n));
    if (jac) jac->resize(static_cast<Eigen::Index>(n), np);
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(n); ++i) {
      const double dt = t[i] - par[2];
      const auto [s, ds] = sinc_and_derivative(0.5 * par[1] * dt);
      r[i] = par[0] * s * s + par[3] - y[i];
      if (jac) {
        const double g = 2.0 * par[0] * s * ds;
        (*jac)(i, 0) = s * s;
        (*jac)(i, 1) = g * 0.5 * dt;
        (*jac)(i, 2) = -g * 0.5 * par[1];
        if (free_baseline) (*jac)(i, 3) = 1.0;
      }
    }
  };

  Eigen::VectorXd r;
  Eigen::MatrixXd jac;
  residuals(p, r, &jac);
  double cost = r.squaredNorm();
  double lambda = 1e-3;
  int iter = 0;
  bool converged = false;

  auto make_result = [&](const Eigen::Vector4d& par, double c, int iterations) {
    Sinc2Fit f;
    f.amplitude = par[0] * scale;
    f.width = std::abs(par[1]) / kTimeUnit;
    f.center = par[2] * kTimeUnit;
    f.baseline = par[3] * scale;
    f.residual_norm = std::sqrt(c) * scale;
    f.iterations = iterations;
    return f;
  };

  for (iter = 1; iter <= options.max_iterations; ++iter) {
    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    const Eigen::VectorXd grad = jac.transpose() * r;
    if (grad.lpNorm<Eigen::Infinity>() < 1e-15 * (1.0 + cost)) {
      converged = true;
      break;
    }
    bool accepted = false;
    while (lambda < 1e16) {
      Eigen::MatrixXd a = jtj;
      for (int k = 0; k < np; ++k) a(k, k) += lambda * std::max(jtj(k, k), 1e-12);
      const Eigen::VectorXd step = a.ldlt().solve(-grad);
      Eigen::Vector4d trial = p;
      trial.head(np) += step;
      Eigen::VectorXd r_trial;
      residuals(trial, r_trial, nullptr);
      const double c_trial = r_trial.squaredNorm();
      if (std::isfinite(c_trial) && c_trial <= cost) {
        const double rel_drop = (cost - c_trial) / std::max(cost, 1e-300);
        const double rel_step = step.norm() / (p.head(np).norm() + 1e-300);
        p = trial;
        cost = c_trial;
        residuals(p, r, &jac);
        lambda = std::max(lambda / 10.0, 1e-12);
        accepted = true;
        if (rel_step < 1e-13 || (rel_drop < 1e-16 && rel_step < 1e-9)) converged = true;
        break;
      }
      lambda *= 10.0;
    }
    if (!accepted) {
      // No downhill step at any damping: a stationary point to working precision.
      converged = true;
    }
    if (converged) break;
  }

  Sinc2Fit result = make_result(p, cost, std::min(iter, options.max_iterations));
  if (!converged) {
    std::ostringstream os;
    os << "sinc^2 fit did not converge in " << options.max_iterations << " iterations";
    throw FitError(os.str(), result);
  }
  return result;
}

Sinc2Fit fit_sinc2(const CorrelationProfile& profile, const FitOptions& options) {
  return fit_sinc2(profile.delays, profile.intensity, options);
}

}  // namespace twinbeam
