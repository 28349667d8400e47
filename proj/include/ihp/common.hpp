#pragma once

#include <stdexcept>
#include <string>

namespace ihp {

inline constexpr const char* kVersion = "0.1.0";

// Thrown when a dense-representation request exceeds the configured cap.
struct CapacityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when a spectrum carries the wrong normalization for an operation.
struct NormalizationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when a protocol posts more charged bits than its budget allows.
struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when edge labels on a cycle are mutually inconsistent.
struct ContradictionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when a stated precondition of an operation does not hold.
struct PreconditionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace ihp
