#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bj {

enum class ErrorKind {
    InsufficientData,
    DimensionMismatch,
    ImputationImpossible,
    DegenerateSeries,
    NumericalDegeneracy,
    InvalidDof,
    DomainError,
    ConvergenceFailure,
    SchemaError,
    UnknownCountry,
    EmptyRange,
    IoError,
    ConfigError,
};

[[nodiscard]] std::string_view to_string(ErrorKind kind) noexcept;

/// Base exception for every library failure. The kind is stable and is what
/// reports serialize; the message is for humans.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace bj
