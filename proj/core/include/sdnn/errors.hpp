#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sdnn {

/// Broad error families. The command-line tool maps each one to an exit code.
enum class ErrorKind {
  parameter,   // bad argument or configuration
  bounds,      // index outside the declared shape
  duplicate,   // repeated coordinate or category
  value,       // non-finite or forbidden value
  shape,       // operand dimensions disagree
  format,      // malformed file content
  length,      // truncated payload
  corruption,  // checksum or structural mismatch in a binary container
  version,     // unsupported container version
  capacity,    // instance too large for the requested routine
  io,          // stream or filesystem failure
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Parse failure carrying the 1-based line it happened on (0 when unknown).
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(ErrorKind::format, "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace sdnn
