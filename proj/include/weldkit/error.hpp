#pragma once

#include <stdexcept>
#include <string>

namespace weldkit {

/// Root of every error thrown by the library. `kind()` drives CLI exit codes.
class Error : public std::runtime_error {
public:
    enum class Kind { Input, Parameter };

    Error(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

// Bad data handed to us (files, records, documents).
struct InputError : Error {
    explicit InputError(const std::string& what) : Error(Kind::Input, what) {}
};
struct DecodeError : InputError {
    using InputError::InputError;
};
struct ParseError : InputError {
    using InputError::InputError;
};
struct FormatError : InputError {
    using InputError::InputError;
};
struct ClassError : InputError {
    using InputError::InputError;
};

// Bad arguments or configuration.
struct ParameterError : Error {
    explicit ParameterError(const std::string& what) : Error(Kind::Parameter, what) {}
};
struct DimensionError : ParameterError {
    using ParameterError::ParameterError;
};
struct GeometryError : ParameterError {
    using ParameterError::ParameterError;
};
struct SpecError : ParameterError {
    using ParameterError::ParameterError;
};
struct SceneError : ParameterError {
    using ParameterError::ParameterError;
};

}  // namespace weldkit
