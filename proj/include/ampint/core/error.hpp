#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ampint {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid argument or configuration. `field()` names the offending input.
class ValidationError : public Error {
public:
    ValidationError(std::string field, const std::string &message)
        : Error(field.empty() ? message : field + ": " + message), field_(std::move(field)), message_(message) {}

    const std::string &field() const noexcept { return field_; }
    const std::string &message() const noexcept { return message_; }

private:
    std::string field_;
    std::string message_;
};

inline void require(bool ok, std::string_view field, std::string_view message) {
    if (!ok) {
        throw ValidationError(std::string(field), std::string(message));
    }
}

} // namespace ampint
