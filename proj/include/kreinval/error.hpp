#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kreinval {

enum class ErrorKind {
  DimensionMismatch,
  InvalidArgument,
  NullVector,
  NullDegeneracy,
  OrientationMismatch,
  RankDeficient,
  SolverFailure,
  DefectiveMatrix,
  ComplexSpectrum,
  WrongConeCount,
  GapViolation,
  OppositeComponent,
  RetriesExhausted,
  SizeGuard,
  CyclingGuard,
  Schema,
  Io,
  Config,
};

std::string_view to_string(ErrorKind kind);

// Single exception type for the library; callers branch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace kreinval
