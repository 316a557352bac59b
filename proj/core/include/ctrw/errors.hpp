#pragma once

#include <stdexcept>
#include <string>

namespace ctrw {

/// Invalid parameters supplied by the caller (NaN, out-of-range probability,
/// non-positive rate, empty grid, ...).
class ValidationError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A closed form hits a zero denominator for this parameter combination.
class DegenerateParameters : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// An inverse problem (e.g. unbiasing) has no admissible solution.
class ConstraintViolation : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// An operation was called outside the regime where its formula holds.
class PreconditionViolation : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

/// A propagator denominator vanished at the requested (omega, s).
class PoleProximity : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

class NonConvergence : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class InsufficientEvents : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace ctrw
