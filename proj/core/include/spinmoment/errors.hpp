#pragma once

#include <stdexcept>
#include <string>

namespace spinmoment {

// Raised when an input violates a structural constraint (Hermiticity,
// Casimir trace, commutator consistency, ...). `constraint()` names the
// violated constraint so callers can report it without parsing what().
class ConstraintViolation : public std::invalid_argument {
 public:
  ConstraintViolation(std::string constraint, const std::string& detail)
      : std::invalid_argument(constraint + ": " + detail),
        constraint_(std::move(constraint)) {}

  const std::string& constraint() const noexcept { return constraint_; }

 private:
  std::string constraint_;
};

// Raised when a request exceeds a configured size cap (qubit count, SDP
// dimension).
class CapacityExceeded : public std::length_error {
 public:
  using std::length_error::length_error;
};

}  // namespace spinmoment
