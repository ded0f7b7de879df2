#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace lt {

// Domain failures carry a stable code that callers (and the CLI) match on.
// The code is the first token of what(), so logs stay greppable.
class DomainError : public std::runtime_error {
public:
    DomainError(std::string code, const std::string& detail)
        : std::runtime_error(code + ": " + detail), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

[[noreturn]] inline void fail(const char* code, const std::string& detail) {
    throw DomainError(code, detail);
}

} // namespace lt
