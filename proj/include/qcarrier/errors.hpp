#pragma once

#include <stdexcept>
#include <string>

namespace qcarrier {

// Bad argument: out-of-range parameter, duplicate targets, mismatched dimensions.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A register would exceed the configured qubit cap.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Input failed a structural check (non-unitary gate, non-normalized state, ...).
class ValidationError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A computed result violated an invariant it must satisfy (e.g. non-CPTP channel).
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Request is well formed but outside what the chosen engine handles.
class UnsupportedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qcarrier
