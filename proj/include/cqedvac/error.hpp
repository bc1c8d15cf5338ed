#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace cqedvac {

/// Input outside the domain of an operation (nonpositive inductance, k out of
/// range, singular asymptotic formula, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An iterative procedure stopped before meeting its tolerance. Carries the
/// best residuals reached so callers can decide what to keep.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, std::vector<double> best_residuals)
      : std::runtime_error(what), residuals_(std::move(best_residuals)) {}

  const std::vector<double>& residuals() const noexcept { return residuals_; }

 private:
  std::vector<double> residuals_;
};

/// Fock cutoff too small to hold a truncated coherent state.
class CutoffError : public std::runtime_error {
 public:
  CutoffError(const std::string& what, int mode, int required)
      : std::runtime_error(what), mode_(mode), required_(required) {}

  int mode() const noexcept { return mode_; }
  int required_cutoff() const noexcept { return required_; }

 private:
  int mode_;
  int required_;
};

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, std::string key, int line)
      : std::runtime_error(what), key_(std::move(key)), line_(line) {}

  const std::string& key() const noexcept { return key_; }
  /// 1-based line in the config document, 0 when the value came from a flag.
  int line() const noexcept { return line_; }

 private:
  std::string key_;
  int line_;
};

}  // namespace cqedvac
