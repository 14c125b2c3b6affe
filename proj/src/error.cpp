#include "subadd/error.hpp"

namespace subadd {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::EnumerationLimitExceeded: return "EnumerationLimitExceeded";
    case ErrorKind::CyclicGraph: return "CyclicGraph";
    case ErrorKind::NonPositivePotential: return "NonPositivePotential";
    case ErrorKind::InvalidProbability: return "InvalidProbability";
    case ErrorKind::EmptySubset: return "EmptySubset";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::SpaceMismatch: return "SpaceMismatch";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::WrongDimension: return "WrongDimension";
    case ErrorKind::ParameterOutOfRange: return "ParameterOutOfRange";
    case ErrorKind::NotSymmetric: return "NotSymmetric";
    case ErrorKind::IndefiniteMatrix: return "IndefiniteMatrix";
    case ErrorKind::NotTwiceDifferentiable: return "NotTwiceDifferentiable";
    case ErrorKind::NotTwoSidedClose: return "NotTwoSidedClose";
    case ErrorKind::QuadratureNonConvergence: return "QuadratureNonConvergence";
    case ErrorKind::NotOneDimensional: return "NotOneDimensional";
    case ErrorKind::SolverCycling: return "SolverCycling";
    case ErrorKind::NotBfsOrdering: return "NotBfsOrdering";
    case ErrorKind::SeparationViolated: return "SeparationViolated";
    case ErrorKind::NodeNotPresent: return "NodeNotPresent";
    case ErrorKind::StructureMismatch: return "StructureMismatch";
    case ErrorKind::MetricRequired: return "MetricRequired";
    case ErrorKind::InvalidModel: return "InvalidModel";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace subadd
