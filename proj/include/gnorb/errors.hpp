#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gnorb {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class RangeError : public Error {
 public:
  using Error::Error;
};

class ParamError : public Error {
 public:
  using Error::Error;
};

// Word or element text that does not match the grammar. `position` is the
// zero-based character offset of the offending token.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " (at position " + std::to_string(position) + ")"),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class BudgetError : public Error {
 public:
  BudgetError(const std::string& what, std::size_t required_bytes)
      : Error(what), required_bytes_(required_bytes) {}
  std::size_t required_bytes() const { return required_bytes_; }

 private:
  std::size_t required_bytes_;
};

class UndefinedInvariant : public Error {
 public:
  using Error::Error;
};

class IllConditioned : public Error {
 public:
  using Error::Error;
};

}  // namespace gnorb
