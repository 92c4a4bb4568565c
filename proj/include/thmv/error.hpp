#pragma once

#include <stdexcept>
#include <string>

namespace thmv {

// Root of every error the library raises.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shapes that do not compose (inner dimensions, factor counts, ...).
class DimensionError : public Error {
 public:
  using Error::Error;
};

// An index (1-based at the API boundary) outside its range.
class IndexError : public Error {
 public:
  using Error::Error;
};

// An oracle operation called in the wrong phase.
class PhaseError : public Error {
 public:
  using Error::Error;
};

// A hint whose nonzero count exceeds ceil(n^tau) in strict mode.
class BudgetError : public Error {
 public:
  using Error::Error;
};

// A reference/materialization path asked to build more rows than its cap.
class CapExceededError : public Error {
 public:
  using Error::Error;
};

// Checked natural-number arithmetic left the 64-bit range.
class OverflowError : public Error {
 public:
  using Error::Error;
};

// Malformed parameters (tau out of range, k = 0, duplicate entries, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class FitError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace thmv
