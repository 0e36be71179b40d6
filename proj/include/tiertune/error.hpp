#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tiertune {

enum class Errc {
  UnknownPage,
  InvalidTarget,
  InvalidParams,
  CapacityExceeded,
  InfeasibleTarget,
  InvalidHotThr,
  EmptyDatabase,
  MalformedRecord,
  ParseError,
  VersionError,
  DegenerateInterval,
  IoError,
};

const char* to_string(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

/// Thrown by the line-oriented readers; `line()` is 1-based.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what);

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace tiertune
