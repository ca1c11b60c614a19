#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace fdb {

// Covariance matrix failed to factorize even after diagonal regularization.
class FactorizationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Circulant embedding produced an eigenvalue below the clamping tolerance.
class EmbeddingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A solver produced a non-finite value; carries the offending step index.
class NumericError : public std::runtime_error {
public:
    NumericError(const std::string& what, std::int64_t step)
        : std::runtime_error(what + " at step " + std::to_string(step)), step_index(step) {}
    std::int64_t step_index;
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace fdb
