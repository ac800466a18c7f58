#pragma once

#include <stdexcept>
#include <string>

namespace laplace {

/// Evaluation at a point where a map or expansion is not defined
/// (on a slit, at the source, at a component center).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A caller-supplied argument is out of range.
class ArgumentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Boundary components overlap, contain the source, or lie outside the outer disk.
class GeometryError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed configuration text. `field()` names the offending key path.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& what)
        : std::runtime_error(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

}  // namespace laplace
