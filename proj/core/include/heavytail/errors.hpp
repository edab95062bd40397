#pragma once

#include <stdexcept>
#include <string>

namespace heavytail {

// Unreadable files, malformed records, and datasets too small or too
// degenerate to operate on. The CLI maps this to exit code 3, while
// std::invalid_argument / std::domain_error map to exit code 2.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace heavytail
