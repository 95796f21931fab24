#pragma once

#include <stdexcept>
#include <string>

namespace mmcache {

// Thrown when a config file cannot be parsed; carries the offending line.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& msg, int line)
        : std::runtime_error(msg + " (line " + std::to_string(line) + ")"), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

// Thrown when a parameter set violates a model invariant; names the field.
class ValidationError : public std::invalid_argument {
public:
    ValidationError(const std::string& field, const std::string& msg)
        : std::invalid_argument("invalid '" + field + "': " + msg), field_(field) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

}  // namespace mmcache
