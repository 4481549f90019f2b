#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace paci {

// Machine-readable error categories. The string form is what the CLI and the
// HTTP API put in their error documents.
enum class ErrorCode {
    invalid_input,
    insufficient_history,
    series_too_short,
    missing_day,
    negative_count,
    invalid_judgements,
    inconsistent_judgements,
    invalid_config,
    config_mismatch,
    empty_polyhedron,
    out_of_range,
    io_error,
};

inline const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::invalid_input: return "invalid-input";
        case ErrorCode::insufficient_history: return "insufficient-history";
        case ErrorCode::series_too_short: return "series-too-short";
        case ErrorCode::missing_day: return "missing-day";
        case ErrorCode::negative_count: return "negative-count";
        case ErrorCode::invalid_judgements: return "invalid-judgements";
        case ErrorCode::inconsistent_judgements: return "inconsistent-judgements";
        case ErrorCode::invalid_config: return "invalid-config";
        case ErrorCode::config_mismatch: return "config-mismatch";
        case ErrorCode::empty_polyhedron: return "empty-polyhedron";
        case ErrorCode::out_of_range: return "out-of-range";
        case ErrorCode::io_error: return "io-error";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message, std::vector<std::string> violations = {})
        : std::runtime_error(message), code_(code), violations_(std::move(violations)) {}

    ErrorCode code() const noexcept { return code_; }
    const std::vector<std::string>& violations() const noexcept { return violations_; }

private:
    ErrorCode code_;
    std::vector<std::string> violations_;
};

}  // namespace paci
