#include "tiertune/error.hpp"

namespace tiertune {

const char* to_string(Errc code) noexcept {
  switch (code) {
    case Errc::UnknownPage: return "UnknownPage";
    case Errc::InvalidTarget: return "InvalidTarget";
    case Errc::InvalidParams: return "InvalidParams";
    case Errc::CapacityExceeded: return "CapacityExceeded";
    case Errc::InfeasibleTarget: return "InfeasibleTarget";
    case Errc::InvalidHotThr: return "InvalidHotThr";
    case Errc::EmptyDatabase: return "EmptyDatabase";
    case Errc::MalformedRecord: return "MalformedRecord";
    case Errc::ParseError: return "ParseError";
    case Errc::VersionError: return "VersionError";
    case Errc::DegenerateInterval: return "DegenerateInterval";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

ParseError::ParseError(std::size_t line, const std::string& what)
    : Error(Errc::ParseError, "line " + std::to_string(line) + ": " + what), line_(line) {}

}  // namespace tiertune
