#pragma once

#include <stdexcept>
#include <string>

namespace annealkit {

// Thrown when vector/model lengths disagree.
struct dimension_error : std::invalid_argument {
  explicit dimension_error(const std::string& msg) : std::invalid_argument(msg) {}
};

// Thrown when an input violates a documented parameter constraint.
struct parameter_error : std::invalid_argument {
  explicit parameter_error(const std::string& msg) : std::invalid_argument(msg) {}
};

// Thrown when a request exceeds a hard size guard (enumeration, state-vector memory).
struct capacity_error : std::runtime_error {
  explicit capacity_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Thrown on malformed or unrecognised file content.
struct format_error : std::runtime_error {
  explicit format_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace annealkit
