#pragma once

#include <stdexcept>
#include <string>

namespace qgreedy {

/// Parameters that admit no valid result (odd n*d, depth out of range, ...).
class InfeasibleError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A configured size or memory cap would be exceeded.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed text input (edge lists, angle files, plan files, ...).
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qgreedy
