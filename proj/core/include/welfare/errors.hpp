#pragma once

#include <stdexcept>
#include <string>

namespace welfare {

/// Raised when a caller breaks a documented precondition (dimension
/// mismatch, out-of-range parameter, malformed vector).
class ContractViolation : public std::invalid_argument {
 public:
  explicit ContractViolation(const std::string& what);
};

/// The requested feasible set has no points.
class InfeasibleSet : public std::runtime_error {
 public:
  explicit InfeasibleSet(const std::string& what);
};

/// A configuration the library recognises but deliberately does not handle.
class UnsupportedConfiguration : public std::runtime_error {
 public:
  explicit UnsupportedConfiguration(const std::string& what);
};

/// A utility oracle returned a non-finite value during a solver run.
class OracleFailure : public std::runtime_error {
 public:
  OracleFailure(const std::string& what, std::size_t iteration);
  std::size_t iteration() const noexcept { return iteration_; }

 private:
  std::size_t iteration_;
};

}  // namespace welfare
