#pragma once

#include <stdexcept>
#include <string>

namespace nu {

/// Raised when an input violates a documented precondition (shape, sign,
/// finiteness, malformed file). The CLI maps it to exit code 2.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what)
      : std::invalid_argument(what) {}
};

}  // namespace nu
