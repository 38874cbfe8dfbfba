#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ssig {

enum class ErrorCode {
  invalid_argument,
  parse,
  io,
  format,
  not_found,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message)
      : std::runtime_error(std::move(message)), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Carries the offset of the offending token in the input text.
class ParseError : public Error {
 public:
  ParseError(std::size_t position, std::string message)
      : Error(ErrorCode::parse, std::move(message)), position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

[[noreturn]] inline void throw_invalid(std::string message) {
  throw Error(ErrorCode::invalid_argument, std::move(message));
}

}  // namespace ssig
