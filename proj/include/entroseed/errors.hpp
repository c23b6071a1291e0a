#pragma once

#include <stdexcept>
#include <string>

namespace entroseed {

// Base of all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Unreadable file, truncated stream.
struct IoError : Error {
  using Error::Error;
};

// Unsupported or malformed image data (wrong magic, 16-bit samples, ...).
struct FormatError : Error {
  using Error::Error;
};

// Invalid domain input: bad parameters, shape mismatches, empty input.
struct DomainError : Error {
  using Error::Error;
};

// An entropy spec failed validation; what() is the violated constraint.
struct SpecViolation : DomainError {
  using DomainError::DomainError;
};

// A denominator of a ratio-form entropy vanished.
struct SingularityError : DomainError {
  using DomainError::DomainError;
};

// Seeding ran out of candidates before reaching k centroids.
struct ExhaustionError : DomainError {
  ExhaustionError(const std::string& msg, int found_count)
      : DomainError(msg), found(found_count) {}
  int found;
};

}  // namespace entroseed
