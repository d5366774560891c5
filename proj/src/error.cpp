#include "censmed/error.hpp"

namespace censmed {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::NoUncensoredRows: return "NoUncensoredRows";
        case ErrorKind::RankDeficientDesign: return "RankDeficientDesign";
        case ErrorKind::QuadratureFailure: return "QuadratureFailure";
        case ErrorKind::DegenerateGrid: return "DegenerateGrid";
        case ErrorKind::EmptyArm: return "EmptyArm";
        case ErrorKind::TooManyFailures: return "TooManyFailures";
        case ErrorKind::MissingColumn: return "MissingColumn";
        case ErrorKind::BadValue: return "BadValue";
        case ErrorKind::InconsistentCensoring: return "InconsistentCensoring";
        case ErrorKind::ConfigError: return "ConfigError";
        case ErrorKind::IoError: return "IoError";
    }
    return "Unknown";
}

}  // namespace censmed
