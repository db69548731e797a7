#include "symreeb/error.hpp"

namespace symreeb {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Parse: return "ParseError";
    case ErrorCode::Index: return "IndexError";
    case ErrorCode::NotClosed: return "NotClosed";
    case ErrorCode::NotOrientable: return "NotOrientable";
    case ErrorCode::NotConnected: return "NotConnected";
    case ErrorCode::DegenerateSaddle: return "DegenerateSaddle";
    case ErrorCode::ZeroArea: return "ZeroArea";
    case ErrorCode::DuplicateCriticalValue: return "DuplicateCriticalValue";
    case ErrorCode::NotSimple: return "NotSimple";
    case ErrorCode::InternalSweep: return "InternalSweepError";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::HitsVertex: return "HitsVertex";
    case ErrorCode::InsufficientSamples: return "InsufficientSamples";
    case ErrorCode::IllConditionedFit: return "IllConditionedFit";
    case ErrorCode::MissingCochain: return "MissingCochain";
    case ErrorCode::NoCirculation: return "NoCirculation";
    case ErrorCode::GenusTooSmall: return "GenusTooSmall";
    case ErrorCode::NoLoops: return "NoLoops";
    case ErrorCode::NotHomologous: return "NotHomologous";
    case ErrorCode::DifferentMesh: return "DifferentMesh";
    case ErrorCode::NotZeroMean: return "NotZeroMean";
    case ErrorCode::DomainMismatch: return "DomainMismatch";
    case ErrorCode::Io: return "IoError";
    case ErrorCode::Usage: return "UsageError";
  }
  return "UnknownError";
}

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::Usage: return 64;
    case ErrorCode::Io: return 66;
    case ErrorCode::Parse:
    case ErrorCode::Index:
    case ErrorCode::NotClosed:
    case ErrorCode::NotOrientable:
    case ErrorCode::NotConnected:
    case ErrorCode::DegenerateSaddle:
    case ErrorCode::ZeroArea:
    case ErrorCode::DuplicateCriticalValue: return 3;
    case ErrorCode::NotSimple:
    case ErrorCode::InternalSweep:
    case ErrorCode::OutOfRange:
    case ErrorCode::HitsVertex: return 4;
    case ErrorCode::InsufficientSamples:
    case ErrorCode::IllConditionedFit: return 5;
    case ErrorCode::MissingCochain:
    case ErrorCode::NoCirculation: return 6;
    case ErrorCode::GenusTooSmall:
    case ErrorCode::NoLoops:
    case ErrorCode::NotHomologous: return 7;
    case ErrorCode::DifferentMesh:
    case ErrorCode::NotZeroMean: return 8;
    case ErrorCode::DomainMismatch: return 9;
  }
  return 70;
}

}  // namespace symreeb
