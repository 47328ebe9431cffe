#include "bj/error.hpp"

namespace bj {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::InsufficientData: return "InsufficientData";
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::ImputationImpossible: return "ImputationImpossible";
        case ErrorKind::DegenerateSeries: return "DegenerateSeries";
        case ErrorKind::NumericalDegeneracy: return "NumericalDegeneracy";
        case ErrorKind::InvalidDof: return "InvalidDof";
        case ErrorKind::DomainError: return "DomainError";
        case ErrorKind::ConvergenceFailure: return "ConvergenceFailure";
        case ErrorKind::SchemaError: return "SchemaError";
        case ErrorKind::UnknownCountry: return "UnknownCountry";
        case ErrorKind::EmptyRange: return "EmptyRange";
        case ErrorKind::IoError: return "IoError";
        case ErrorKind::ConfigError: return "ConfigError";
    }
    return "Unknown";
}

}  // namespace bj
