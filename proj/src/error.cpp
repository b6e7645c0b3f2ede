#include "cdp/error.hpp"

namespace cdp {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument:
      return "invalid_argument";
    case ErrorKind::degenerate:
      return "degenerate";
    case ErrorKind::parse:
      return "parse";
    case ErrorKind::io:
      return "io";
  }
  return "unknown";
}

}  // namespace cdp
