#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cdp {

// Broad failure classes. The CLI maps these onto exit codes and the
// `category` field of its error object.
enum class ErrorKind {
  invalid_argument,
  degenerate,
  parse,
  io,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace cdp
