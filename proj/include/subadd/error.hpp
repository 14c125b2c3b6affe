#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace subadd {

enum class ErrorKind {
  EnumerationLimitExceeded,
  CyclicGraph,
  NonPositivePotential,
  InvalidProbability,
  EmptySubset,
  IndexOutOfRange,
  SpaceMismatch,
  DimensionMismatch,
  WrongDimension,
  ParameterOutOfRange,
  NotSymmetric,
  IndefiniteMatrix,
  NotTwiceDifferentiable,
  NotTwoSidedClose,
  QuadratureNonConvergence,
  NotOneDimensional,
  SolverCycling,
  NotBfsOrdering,
  SeparationViolated,
  NodeNotPresent,
  StructureMismatch,
  MetricRequired,
  InvalidModel,
  InvalidArgument,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind), message_(message) {}

  ErrorKind kind() const noexcept { return kind_; }
  /// The message without the kind prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorKind kind_;
  std::string message_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace subadd
