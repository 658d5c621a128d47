#pragma once

#include <stdexcept>
#include <string>

namespace growthlab {

enum class Errc {
  SupportTooLarge,
  OverlappingSupports,
  ModulusTooLarge,
  MonotonicityViolation,
  InsufficientPrefix,
  EmptyCore,
  HeightTooLarge,
  MalformedConjunct,
  ClassMismatch,
  SequenceTooLong,
  EmptyFamily,
  DepthGuard,
  HypothesisFailed,
  SchemaError,
  ParseError,
  UnknownSuite,
  Internal,
};

const char* errc_name(Errc c);

// Single exception type for every guarded failure; the code survives the
// C API boundary as an integer.
class Error : public std::runtime_error {
public:
  Error(Errc code, std::string message)
      : std::runtime_error(std::move(message)), code_(code) {}

  Errc code() const { return code_; }

private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& message) {
  throw Error(code, std::string(errc_name(code)) + ": " + message);
}

}  // namespace growthlab
