#pragma once

#include <numbers>

namespace twinbeam {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s
inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Root of sinc^2(x) = 1/2 with sinc(x) = sin(x)/x.
inline constexpr double kSinc2HalfMaxRoot = 1.3915573782515102;
// FWHM * bandwidth for the Fourier pair box <-> sinc^2(W t / 2).
inline constexpr double kSinc2TimeBandwidth = 4.0 * kSinc2HalfMaxRoot;

}  // namespace twinbeam
