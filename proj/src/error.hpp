#pragma once

#include <stdexcept>
#include <string>

namespace kpcab {

enum class ErrorKind {
  input = 1,
  numerical = 2,
  invalid_kernel = 3,
  parse = 4,
  io = 5,
  unsupported = 6,
};

/// Base of every error raised by the library. The kind maps 1:1 onto the
/// status codes exposed through the C API.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

struct InputError : Error {
  explicit InputError(const std::string& w) : Error(ErrorKind::input, w) {}
};
struct NumericalError : Error {
  explicit NumericalError(const std::string& w) : Error(ErrorKind::numerical, w) {}
};
struct InvalidKernelError : Error {
  explicit InvalidKernelError(const std::string& w) : Error(ErrorKind::invalid_kernel, w) {}
};
struct ParseError : Error {
  explicit ParseError(const std::string& w) : Error(ErrorKind::parse, w) {}
};
struct IoError : Error {
  explicit IoError(const std::string& w) : Error(ErrorKind::io, w) {}
};
struct UnsupportedError : Error {
  explicit UnsupportedError(const std::string& w) : Error(ErrorKind::unsupported, w) {}
};

}  // namespace kpcab
