#pragma once

#include <stdexcept>
#include <string>

namespace regionflow {

/// Raised for bad user input or configuration: malformed files, out-of-range
/// parameters, missing coverage. Carries a short machine-readable code
/// (e.g. "empty_input", "malformed_record") that the CLI reports verbatim.
class InputError : public std::runtime_error {
public:
    InputError(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

}  // namespace regionflow
