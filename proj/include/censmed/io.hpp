#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "censmed/types.hpp"

namespace censmed {

/// 10 significant digits; integral values keep a trailing ".0" and
/// non-finite values print as NA.
std::string format_number(double v);

/// Reads the subject-level CSV. Required columns: y, m, delta; optional a
/// (absent means every row is untreated); covariates are the c_* columns in
/// file order. Censored rows may leave m empty. Errors carry file:line.
Dataset parse_csv(const std::filesystem::path& path, double assay_limit);
Dataset parse_csv(std::istream& in, double assay_limit, const std::string& source_name = "<stream>");

/// Inverse of parse_csv; censored rows get an empty m cell.
void write_csv(const Dataset& data, const std::filesystem::path& path);
void write_csv(const Dataset& data, std::ostream& out);

/// Config file entry with its origin for error messages.
struct ConfigEntry {
    std::string key;
    std::string value;
    std::string source;
    int line = 0;
};

/// Flat `key = value` lines; '#' starts a comment; blank lines ignored.
std::vector<ConfigEntry> parse_config(const std::filesystem::path& path);
std::vector<ConfigEntry> parse_config(std::istream& in, const std::string& source_name);

}  // namespace censmed
