#include "scalefit/error.hpp"

namespace scalefit {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Domain: return "domain error";
    case ErrorKind::InvalidSpec: return "invalid spec";
    case ErrorKind::Synthesis: return "synthesis failure";
    case ErrorKind::LengthMismatch: return "length mismatch";
    case ErrorKind::InsufficientData: return "insufficient data";
    case ErrorKind::InsufficientPoints: return "insufficient usable scales";
    case ErrorKind::Overflow: return "overflow";
    case ErrorKind::ZeroEnergy: return "zero energy";
    case ErrorKind::Io: return "I/O error";
    case ErrorKind::Parse: return "parse error";
    case ErrorKind::Version: return "unknown format version";
  }
  return "error";
}

}  // namespace scalefit
