#pragma once

#include <stdexcept>
#include <string>

namespace patchlab {

/// Violated precondition of a library call (dimension mismatch, bad parameter).
class ContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed input file.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Filesystem failure or payload size mismatch.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw ContractError(message);
}

}  // namespace patchlab
