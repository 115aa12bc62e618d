#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hawkes {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid model, configuration or argument.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file. Carries the 1-based line number (0 when unknown).
class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& message)
      : Error(source + ":" + std::to_string(line) + ": " + message), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A kernel whose L1 norm is infinite.
class NormDivergenceError : public Error {
 public:
  using Error::Error;
};

/// Numerical failure: non-convergence, singular systems, runaway simulations.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// The norm matrix violates the stability condition.
class StabilityError : public NumericalError {
 public:
  StabilityError(const std::string& message, double spectral_radius)
      : NumericalError(message), spectral_radius_(spectral_radius) {}

  double spectral_radius() const noexcept { return spectral_radius_; }

 private:
  double spectral_radius_;
};

/// Simulation exceeded its event cap.
class DivergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Dense system too ill-conditioned to trust. Carries the reciprocal condition estimate.
class IllConditionedError : public NumericalError {
 public:
  IllConditionedError(const std::string& message, double rcond)
      : NumericalError(message), rcond_(rcond) {}

  double rcond() const noexcept { return rcond_; }

 private:
  double rcond_;
};

}  // namespace hawkes
