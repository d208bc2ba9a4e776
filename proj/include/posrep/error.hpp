#pragma once

#include <stdexcept>
#include <string>

namespace posrep {

enum class Err {
  SingularCell,
  ModelMismatch,
  ConventionFailure,
  NotInGroup,
  NotInLevi,
  NotUnipotent,
  NotTransverse,
  NotInUstar,
  InvalidTriangulation,
  UnsupportedSurface,
  NotFlippable,
  NotAPath,
  NotInvariant,
  IncompatibleFraming,
  RegimeViolation,
  InternalInconsistency,
  NotNormalizer,
  ParseError,
};

const char* err_name(Err e);

// Every failure carries a witness: the edge, vertex, pairing or line it is about.
class Error : public std::runtime_error {
 public:
  Error(Err code, std::string witness, const std::string& msg)
      : std::runtime_error(msg), code_(code), witness_(std::move(witness)) {}
  Error(Err code, const std::string& msg) : Error(code, "", msg) {}

  Err code() const { return code_; }
  const std::string& witness() const { return witness_; }

 private:
  Err code_;
  std::string witness_;
};

}  // namespace posrep
