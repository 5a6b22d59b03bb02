#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace tauband {

// Error categories map onto the CLI exit codes (2/3/4).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Precondition violations on numeric inputs (bad geometry, bad targets, ...).
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// Non-fatal diagnostics are routed through an optional callback so that
// library code stays silent by default.
using WarnFn = std::function<void(const std::string&)>;

inline void emit_warning(const WarnFn& warn, const std::string& msg) {
    if (warn) warn(msg);
}

}  // namespace tauband
