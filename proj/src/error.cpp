#include "trajmap/error.hpp"

namespace trajmap {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput: return "invalid input";
    case ErrorKind::Underdetermined: return "underdetermined";
    case ErrorKind::IllConditioned: return "ill-conditioned";
    case ErrorKind::RouteMismatch: return "route mismatch";
    case ErrorKind::TraceCorrupt: return "trace corrupt";
    case ErrorKind::InsufficientData: return "insufficient data";
    case ErrorKind::NoRoute: return "no route";
    case ErrorKind::CoverageImpossible: return "coverage impossible";
    case ErrorKind::Parse: return "parse error";
    case ErrorKind::UndefinedMetrics: return "undefined metrics";
    case ErrorKind::HeadingUndefined: return "heading undefined";
    case ErrorKind::WindowTooSparse: return "window too sparse";
    case ErrorKind::Io: return "i/o error";
  }
  return "unknown";
}

bool is_numerical(ErrorKind kind) {
  return kind == ErrorKind::Underdetermined || kind == ErrorKind::IllConditioned;
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind), message_(message) {}

}  // namespace trajmap
