#pragma once

#include <stdexcept>
#include <string>

namespace crkfr {

/// Invalid or inconsistent run configuration (CLI exit code 3).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A physical quantity was requested outside its domain of definition.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An element mean or a limited state left the admissible set (CLI exit code 2).
class AdmissibilityError : public std::runtime_error {
 public:
  AdmissibilityError(const std::string& what, long element, long step)
      : std::runtime_error(what), element_(element), step_(step) {}
  long element() const noexcept { return element_; }
  long step() const noexcept { return step_; }

 private:
  long element_;
  long step_;
};

/// A local cRK stage produced a state outside the flux domain.
class StageFailure : public std::runtime_error {
 public:
  StageFailure(const std::string& what, long element)
      : std::runtime_error(what), element_(element) {}
  long element() const noexcept { return element_; }

 private:
  long element_;
};

}  // namespace crkfr
