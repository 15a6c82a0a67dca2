#ifndef ARFEX_ERROR_HPP
#define ARFEX_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace arfex {

enum class ErrorKind {
  InvalidArgument,
  InvalidImage,
  ImageTooSmall,
  NoFeatures,
  DuplicateId,
  IoError,
  ParseError,
  VersionMismatch,
  DegenerateConfiguration,
  SingularSystem,
  InsufficientMatches,
  PointAtInfinity,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library. The kind selects the CLI exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace arfex

#endif  // ARFEX_ERROR_HPP
