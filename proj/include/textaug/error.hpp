#pragma once

#include <stdexcept>
#include <string>

namespace textaug {

enum class ErrorKind {
  io,
  parse,
  invalid_argument,
  not_found,
  runtime,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace textaug
