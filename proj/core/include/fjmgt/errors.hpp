#pragma once

#include <stdexcept>
#include <string>

namespace fjmgt {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// kernels
class DeltaNotPointwise : public Error {
 public:
  DeltaNotPointwise() : Error("Dirac delta kernel has no pointwise values") {}
};

class NonpositiveTime : public Error {
 public:
  explicit NonpositiveTime(double t)
      : Error("kernel evaluated at non-positive time t = " + std::to_string(t)) {}
};

class ResolventUnsolvable : public Error {
 public:
  using Error::Error;
};

// convolution
class WeightOverflow : public Error {
 public:
  using Error::Error;
};

class LengthMismatch : public Error {
 public:
  using Error::Error;
};

// spectral / experiments
class GridMismatch : public Error {
 public:
  using Error::Error;
};

// solvers
class PicardDiverged : public Error {
 public:
  PicardDiverged(double t, int iterations, double increment)
      : Error("Picard iteration did not converge at t = " + std::to_string(t) + " after " +
              std::to_string(iterations) + " iterations (last increment " +
              std::to_string(increment) + ")"),
        time(t) {}
  double time;
};

class Degenerate : public Error {
 public:
  Degenerate(double t, double minimum, double lower)
      : Error("leading coefficient degenerated at t = " + std::to_string(t) +
              ": min a(x) = " + std::to_string(minimum) + " < " + std::to_string(lower)),
        time(t),
        grid_minimum(minimum) {}
  double time;
  double grid_minimum;
};

// experiments
class NonpositiveError : public Error {
 public:
  using Error::Error;
};

/// Configuration problem attributable to one key.
class ConfigError : public Error {
 public:
  ConfigError(std::string key, const std::string& message)
      : Error("config key '" + key + "': " + message), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

}  // namespace fjmgt
