#pragma once

#include <stdexcept>
#include <string>

namespace consensus {

/// Root of the library's exception hierarchy. `kind()` is a stable,
/// machine-readable name used on the CLI's diagnostic stream.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    [[nodiscard]] virtual const char* kind() const noexcept = 0;
};

/// The input itself is wrong (bad parameters, wrong model kind, bad index).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// The input is well-formed but the requested computation cannot be carried out.
class ComputationError : public Error {
public:
    using Error::Error;
};

class ParameterError final : public ValidationError {
public:
    using ValidationError::ValidationError;
    [[nodiscard]] const char* kind() const noexcept override { return "ParameterError"; }
};

class TopologyError final : public ValidationError {
public:
    using ValidationError::ValidationError;
    [[nodiscard]] const char* kind() const noexcept override { return "TopologyError"; }
};

class IndexError final : public ValidationError {
public:
    using ValidationError::ValidationError;
    [[nodiscard]] const char* kind() const noexcept override { return "IndexError"; }
};

class SizeError final : public ComputationError {
public:
    using ComputationError::ComputationError;
    [[nodiscard]] const char* kind() const noexcept override { return "SizeError"; }
};

/// |lambda_s| == |lambda_l|: the equal-modulus equation has no nonzero solution.
class DegenerateError final : public ComputationError {
public:
    using ComputationError::ComputationError;
    [[nodiscard]] const char* kind() const noexcept override { return "DegenerateError"; }
};

class UnsupportedParityError final : public ComputationError {
public:
    using ComputationError::ComputationError;
    [[nodiscard]] const char* kind() const noexcept override { return "UnsupportedParityError"; }
};

class DivergenceError final : public ComputationError {
public:
    using ComputationError::ComputationError;
    [[nodiscard]] const char* kind() const noexcept override { return "DivergenceError"; }
};

class InsufficientDataError final : public ComputationError {
public:
    using ComputationError::ComputationError;
    [[nodiscard]] const char* kind() const noexcept override { return "InsufficientDataError"; }
};

}  // namespace consensus
