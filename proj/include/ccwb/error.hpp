#pragma once

#include <stdexcept>
#include <string>

namespace ccwb {

// Base of every error thrown by the workbench.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SizeLimitError : public Error {
 public:
  using Error::Error;
};

class InvalidRectError : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

// Caller broke an operation's precondition (wrong mode, wrong leaf kind, ...).
class UsageError : public Error {
 public:
  using Error::Error;
};

// A half-duplex strategy has no action or output for a reached history.
class StrategyIncompleteError : public Error {
 public:
  using Error::Error;
};

// A construction that must hold by design did not (e.g. U disagrees across branches).
class ConstructionError : public Error {
 public:
  using Error::Error;
};

}  // namespace ccwb
