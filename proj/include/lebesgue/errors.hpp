#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lebesgue {

enum class ErrorCode {
  invalid_argument,
  resource_limit,
  non_convergence,
  identity_violation,
  precision_exhausted,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what) : Error(ErrorCode::invalid_argument, what) {}
};

// Raised before allocation when a lattice or grid would exceed the memory budget.
class ResourceLimit : public Error {
 public:
  ResourceLimit(const std::string& what, double estimate)
      : Error(ErrorCode::resource_limit, what + " (estimated " + std::to_string(estimate) + " entries)"),
        estimate_(estimate) {}
  double estimate() const noexcept { return estimate_; }

 private:
  double estimate_;
};

class PrecisionExhausted : public Error {
 public:
  explicit PrecisionExhausted(const std::string& what) : Error(ErrorCode::precision_exhausted, what) {}
};

}  // namespace lebesgue
