#pragma once

#include <stdexcept>
#include <string>

namespace symreeb {

enum class ErrorCode {
  // mesh
  Parse,
  Index,
  NotClosed,
  NotOrientable,
  NotConnected,
  DegenerateSaddle,
  ZeroArea,
  DuplicateCriticalValue,
  // reeb
  NotSimple,
  InternalSweep,
  OutOfRange,
  HitsVertex,
  // invariants
  InsufficientSamples,
  IllConditionedFit,
  // circulation
  MissingCochain,
  NoCirculation,
  // freezing
  GenusTooSmall,
  NoLoops,
  NotHomologous,
  // equivalence
  DifferentMesh,
  NotZeroMean,
  // advect
  DomainMismatch,
  // plumbing
  Io,
  Usage,
};

const char* to_string(ErrorCode code);

/// Process exit code associated with an error: 64 usage, 66 IO, and a
/// per-module code > 2 for domain errors (0..2 are reserved for verdicts).
int exit_code(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace symreeb
