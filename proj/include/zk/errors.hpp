#pragma once

#include <stdexcept>
#include <string>

namespace zk {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid grid, multiplier or run parameters.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Non-finite or otherwise malformed input data.
class DataError : public Error {
 public:
  using Error::Error;
};

/// Operation called outside its contract (wrong token, inadmissible exponents).
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Input lies outside the mathematical domain of the operation
/// (aliasing band violated, mode off the target lattice, nonzero mean for Ḣ^{s<0}).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Sampling too coarse for the requested frequency or time scale.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

/// Time stepping produced non-finite values.
class InstabilityError : public Error {
 public:
  InstabilityError(const std::string& what, double dt, double time)
      : Error(what), dt_(dt), time_(time) {}
  double dt() const { return dt_; }
  double time() const { return time_; }

 private:
  double dt_;
  double time_;
};

/// File system failures in the experiment driver.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace zk
