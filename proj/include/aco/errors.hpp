#pragma once

#include <stdexcept>
#include <string>

namespace aco {

enum class ErrorKind {
    InvalidArgument,
    Precondition,
    MalformedHeader,
    UnsupportedFormat,
    TruncatedSection,
    SizeLimit,
    Io,
    Internal,
};

constexpr const char* error_kind_name(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::MalformedHeader: return "malformed-header";
    case ErrorKind::UnsupportedFormat: return "unsupported-format";
    case ErrorKind::TruncatedSection: return "truncated-section";
    case ErrorKind::SizeLimit: return "size-limit";
    case ErrorKind::Io: return "io";
    case ErrorKind::Internal: return "internal";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace aco
