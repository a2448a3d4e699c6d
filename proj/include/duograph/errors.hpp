#pragma once

#include <stdexcept>
#include <string>

namespace duograph {

/// Invalid argument or malformed input (CLI exit code 1).
class parameter_error : public std::runtime_error {
 public:
  explicit parameter_error(const std::string& what) : std::runtime_error(what) {}
};

/// A numeric procedure failed to converge or produce a usable value (exit code 2).
class numeric_error : public std::runtime_error {
 public:
  explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

/// File could not be read or written (exit code 3).
class io_error : public std::runtime_error {
 public:
  explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace duograph
