#pragma once

#include <stdexcept>
#include <string>

namespace lrising {

/// A caller broke a precondition (bad index, empty grid, invalid parameter).
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An exponential-cost path was asked to run above its configured cap.
class ResourceLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Filesystem failure; the message carries the offending path.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lrising
