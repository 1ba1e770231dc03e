#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace flock {

// Base of every library exception. The CLI maps subclasses onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain (negative distance, log of 0, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Malformed or non-finite state, unsorted series.
class IntegrityError : public Error {
 public:
  using Error::Error;
};

// A constant was requested outside the decay-exponent regime that defines it.
class RegimeError : public Error {
 public:
  using Error::Error;
};

// A theorem hypothesis does not hold for the supplied data (e.g. EV0 = 0).
class HypothesisError : public Error {
 public:
  using Error::Error;
};

// Initial density description is unusable (non-compact support, bad sizes).
class SpecError : public Error {
 public:
  using Error::Error;
};

// Integration produced non-finite values.
class OverflowError : public Error {
 public:
  OverflowError(std::size_t step, double time)
      : Error("non-finite state after step " + std::to_string(step) + " (t = " +
              std::to_string(time) + ")"),
        step_(step),
        time_(time) {}

  std::size_t step() const noexcept { return step_; }
  double time() const noexcept { return time_; }

 private:
  std::size_t step_;
  double time_;
};

// A sample fell outside the deposition grid.
class CoverageError : public Error {
 public:
  explicit CoverageError(std::size_t sample)
      : Error("sample " + std::to_string(sample) + " lies outside the grid"), sample_(sample) {}

  std::size_t sample() const noexcept { return sample_; }

 private:
  std::size_t sample_;
};

// Scenario configuration violates the schema; path() names the offending field.
class ConfigError : public Error {
 public:
  ConfigError(std::string path, const std::string& what)
      : Error(path + ": " + what), path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace flock
