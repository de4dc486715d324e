#pragma once

#include <stdexcept>
#include <string>

namespace aperiodic {

/// Base class for every error raised by the library. `kind()` is a stable
/// machine-readable tag used by the CLI error JSON.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

class OverflowError : public Error {
public:
    explicit OverflowError(const std::string& what) : Error("overflow", what) {}
};

class RuleError : public Error {
public:
    explicit RuleError(const std::string& what) : Error("invalid_rule", what) {}
};

class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error("domain", what) {}
};

class RangeError : public Error {
public:
    explicit RangeError(const std::string& what) : Error("insufficient_range", what) {}
};

class ContainmentError : public Error {
public:
    explicit ContainmentError(const std::string& what) : Error("containment", what) {}
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error("config", what) {}
};

} // namespace aperiodic
