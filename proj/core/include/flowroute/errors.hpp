#pragma once

#include <stdexcept>
#include <string>

namespace flowroute {

/// Query outside a field's spatial box, depth range, or time window.
class DomainError : public std::out_of_range {
 public:
  DomainError(std::string axis, const std::string& what)
      : std::out_of_range(what), axis_(std::move(axis)) {}
  const std::string& axis() const noexcept { return axis_; }

 private:
  std::string axis_;
};

class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ConstructionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace flowroute
