#include "arfex/error.hpp"

namespace arfex {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::InvalidImage: return "InvalidImage";
    case ErrorKind::ImageTooSmall: return "ImageTooSmall";
    case ErrorKind::NoFeatures: return "NoFeatures";
    case ErrorKind::DuplicateId: return "DuplicateId";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::VersionMismatch: return "VersionMismatch";
    case ErrorKind::DegenerateConfiguration: return "DegenerateConfiguration";
    case ErrorKind::SingularSystem: return "SingularSystem";
    case ErrorKind::InsufficientMatches: return "InsufficientMatches";
    case ErrorKind::PointAtInfinity: return "PointAtInfinity";
  }
  return "Unknown";
}

}  // namespace arfex
