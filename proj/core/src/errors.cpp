#include "sdnn/errors.hpp"

namespace sdnn {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::parameter: return "parameter error";
    case ErrorKind::bounds: return "bounds error";
    case ErrorKind::duplicate: return "duplicate error";
    case ErrorKind::value: return "value error";
    case ErrorKind::shape: return "shape error";
    case ErrorKind::format: return "format error";
    case ErrorKind::length: return "length error";
    case ErrorKind::corruption: return "corruption error";
    case ErrorKind::version: return "version error";
    case ErrorKind::capacity: return "capacity error";
    case ErrorKind::io: return "I/O error";
  }
  return "error";
}

}  // namespace sdnn
