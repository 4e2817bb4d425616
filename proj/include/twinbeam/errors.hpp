#pragma once

#include <stdexcept>
#include <string>

namespace twinbeam {

/// Wavelength or frequency outside the dispersion model's validity interval.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Transverse wave vector exceeds the wave number (no real k_z).
class EvanescentModeError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Argument outside the mathematical domain of a formula (e.g. |Omega| >= omega_1).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An operation was called with arguments violating its documented precondition.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace twinbeam
