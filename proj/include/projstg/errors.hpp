#pragma once

#include <stdexcept>
#include <string>

namespace projstg {

/// Gated normal equations stayed non positive definite after jitter retries.
class SingularSystemError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Solver state became non-finite; carries the epoch where it happened.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, int epoch)
      : std::runtime_error(what), epoch_(epoch) {}
  int epoch() const { return epoch_; }

 private:
  int epoch_;
};

/// Dataset file could not be read or parsed.
class LoadError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Subset enumeration guard exceeded.
class InstanceTooLargeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// More than 10% of trials at some grid point failed.
class SweepHealthError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Output file could not be written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace projstg
