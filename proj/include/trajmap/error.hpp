#ifndef TRAJMAP_ERROR_HPP
#define TRAJMAP_ERROR_HPP

#include <stdexcept>
#include <string>

namespace trajmap {

/// Failure categories raised by the library. The CLI maps them onto exit codes.
enum class ErrorKind {
  InvalidInput,
  Underdetermined,
  IllConditioned,
  RouteMismatch,
  TraceCorrupt,
  InsufficientData,
  NoRoute,
  CoverageImpossible,
  Parse,
  UndefinedMetrics,
  HeadingUndefined,
  WindowTooSparse,
  Io,
};

const char* to_string(ErrorKind kind);

/// True for solver failures (exit code 4 in the CLI); everything else is a data error.
bool is_numerical(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }
  /// The message without the kind prefix that what() carries.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorKind kind_;
  std::string message_;
};

}  // namespace trajmap

#endif  // TRAJMAP_ERROR_HPP
