#pragma once

#include <stdexcept>
#include <string>

namespace patdrift {

struct MalformedSymbol : std::runtime_error {
    explicit MalformedSymbol(const std::string& what) : std::runtime_error(what) {}
};

struct DuplicateSymbol : std::runtime_error {
    explicit DuplicateSymbol(const std::string& what) : std::runtime_error(what) {}
};

struct SchemaError : std::runtime_error {
    explicit SchemaError(const std::string& what) : std::runtime_error(what) {}
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct MissingIndicator : std::runtime_error {
    explicit MissingIndicator(const std::string& what) : std::runtime_error(what) {}
};

struct DivisionByZero : std::runtime_error {
    explicit DivisionByZero(const std::string& what) : std::runtime_error(what) {}
};

struct InsufficientPoints : std::runtime_error {
    explicit InsufficientPoints(const std::string& what) : std::runtime_error(what) {}
};

} // namespace patdrift
