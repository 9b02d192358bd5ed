#pragma once

#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace ionpar {

using Complex = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

namespace constants {
inline constexpr double hbar = 1.054571817e-34;            // J s
inline constexpr double elementary_charge = 1.602176634e-19;  // C
inline constexpr double vacuum_permittivity = 8.8541878128e-12;
inline constexpr double atomic_mass_unit = 1.66053906660e-27;  // kg
inline constexpr double yb171_mass = 170.9363258 * atomic_mass_unit;
}  // namespace constants

/// Principal trap axis. X and Y are the radial buses, Z is the chain axis.
enum class Axis : std::uint8_t { X, Y, Z };

std::string_view to_string(Axis axis);
Axis parse_axis(std::string_view text);

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid input: bad config, out-of-range index, violated precondition.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure failed (non-convergence, instability, infeasible design).
class NumericError : public Error {
 public:
  using Error::Error;
};

class SolverError : public NumericError {
 public:
  SolverError(const std::string& what, double residual)
      : NumericError(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

class ChainInstabilityError : public NumericError {
 public:
  using NumericError::NumericError;
};

class DesignError : public NumericError {
 public:
  using NumericError::NumericError;
};

class PowerLimitError : public DesignError {
 public:
  using DesignError::DesignError;
};

class AlignmentError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Population reached the top Fock level of a truncated mode.
class CutoffError : public NumericError {
 public:
  CutoffError(const std::string& what, int mode_slot, double population)
      : NumericError(what), mode_slot_(mode_slot), population_(population) {}
  int mode_slot() const { return mode_slot_; }
  double population() const { return population_; }

 private:
  int mode_slot_;
  double population_;
};

class ConvergenceError : public NumericError {
 public:
  using NumericError::NumericError;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace ionpar
