#pragma once

#include <stdexcept>
#include <string>

namespace msmine {

// Error categories map 1:1 onto CLI exit codes (2, 3, 4).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

class MiningError : public std::runtime_error {
public:
    explicit MiningError(const std::string& what) : std::runtime_error(what) {}
};

class AnalysisError : public std::runtime_error {
public:
    explicit AnalysisError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace msmine
