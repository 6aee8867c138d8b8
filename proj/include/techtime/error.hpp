#pragma once

#include <stdexcept>
#include <string>

namespace techtime {

// Failure categories surfaced by the pipeline. CLI maps these to exit codes.
enum class Err {
  MalformedRecord,
  IndexOutOfRange,
  EmptyMesh,
  TruncatedFile,
  CountMismatch,
  DegenerateMesh,
  SamplingExhausted,
  InvalidPose,
  ShapeMismatch,
  EmptySet,
  EmptyScene,
  EmptyDataset,
  PoolTooSmall,
  PoolMissing,
  InvalidRange,
  Overflow,
  NonFiniteLoss,
  NonFiniteGradient,
  BadMagic,
  VersionMismatch,
  Truncated,
  IoFailure,
  InvalidConfig,
};

const char* err_name(Err e);

class Error : public std::runtime_error {
 public:
  Error(Err code, const std::string& msg)
      : std::runtime_error(std::string(err_name(code)) + ": " + msg), code_(code) {}

  Err code() const { return code_; }

 private:
  Err code_;
};

[[noreturn]] inline void raise(Err code, const std::string& msg) { throw Error(code, msg); }

}  // namespace techtime
