#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace censmed {

enum class ErrorKind {
    InvalidArgument,
    NoUncensoredRows,
    RankDeficientDesign,
    QuadratureFailure,
    DegenerateGrid,
    EmptyArm,
    TooManyFailures,
    MissingColumn,
    BadValue,
    InconsistentCensoring,
    ConfigError,
    IoError,
};

std::string_view to_string(ErrorKind kind);

// Single exception type for the library; kind() is what callers branch on.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace censmed
