#include "censmed/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "censmed/error.hpp"

namespace censmed {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(trim(cell));
            cell.clear();
        } else {
            cell.push_back(ch);
        }
    }
    out.push_back(trim(cell));
    return out;
}

std::string where(const std::string& source, int line) {
    std::ostringstream os;
    os << source << ":" << line;
    return os.str();
}

std::optional<double> to_double(const std::string& s) {
    if (s.empty()) return std::nullopt;
    double v = 0.0;
    const auto* end = s.data() + s.size();
    const auto res = std::from_chars(s.data(), end, v);
    if (res.ec != std::errc() || res.ptr != end || !std::isfinite(v)) return std::nullopt;
    return v;
}

}  // namespace

std::string format_number(double v) {
    if (!std::isfinite(v)) return "NA";
    if (v == 0.0) return "0.0";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    std::string s(buf);
    if (s.find_first_of(".e") == std::string::npos) s += ".0";
    return s;
}

Dataset parse_csv(std::istream& in, double assay_limit, const std::string& source) {
    std::string line;
    int line_no = 0;
    if (!std::getline(in, line)) {
        throw Error(ErrorKind::MissingColumn, where(source, 1) + ": missing header row");
    }
    ++line_no;
    const std::vector<std::string> header = split_csv_line(line);
    std::map<std::string, std::size_t> col;
    std::vector<std::size_t> cov_cols;
    Dataset data;
    data.assay_limit = assay_limit;
    for (std::size_t j = 0; j < header.size(); ++j) {
        col[header[j]] = j;
        if (header[j].rfind("c_", 0) == 0) {
            cov_cols.push_back(j);
            data.covariate_names.push_back(header[j]);
        }
    }
    for (const char* required : {"y", "m", "delta"}) {
        if (!col.count(required)) {
            throw Error(ErrorKind::MissingColumn, where(source, 1) + ": missing column '" + required + "'");
        }
    }
    const std::size_t y_col = col["y"];
    const std::size_t m_col = col["m"];
    const std::size_t d_col = col["delta"];
    const std::optional<std::size_t> a_col = col.count("a") ? std::optional(col["a"]) : std::nullopt;

    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const std::vector<std::string> cells = split_csv_line(line);
        if (cells.size() != header.size()) {
            throw Error(ErrorKind::BadValue, where(source, line_no) + ": expected " + std::to_string(header.size()) +
                                                 " fields, found " + std::to_string(cells.size()));
        }
        auto bad = [&](const std::string& name, const std::string& detail) {
            return Error(ErrorKind::BadValue,
                         where(source, line_no) + ": column '" + name + "': " + detail);
        };
        auto binary = [&](std::size_t j) {
            const auto v = to_double(cells[j]);
            if (!v || (*v != 0.0 && *v != 1.0)) throw bad(header[j], "expected 0 or 1, got '" + cells[j] + "'");
            return static_cast<int>(*v);
        };
        Observation o;
        o.y = binary(y_col);
        o.delta = binary(d_col);
        o.a = a_col ? binary(*a_col) : 0;
        for (std::size_t j : cov_cols) {
            const auto v = to_double(cells[j]);
            if (!v) throw bad(header[j], "expected a number, got '" + cells[j] + "'");
            o.c.push_back(*v);
        }
        const std::string& m_cell = cells[m_col];
        if (o.delta == 1) {
            const auto v = to_double(m_cell);
            if (!v) throw bad("m", "uncensored row needs a numeric mediator, got '" + m_cell + "'");
            if (!(*v > assay_limit)) {
                throw Error(ErrorKind::InconsistentCensoring,
                            where(source, line_no) + ": delta = 1 but m = " + m_cell + " is not above the assay limit");
            }
            o.m = *v;
        } else if (!m_cell.empty()) {
            const auto v = to_double(m_cell);
            if (!v) throw bad("m", "expected a number or empty, got '" + m_cell + "'");
            if (*v > assay_limit) {
                throw Error(ErrorKind::InconsistentCensoring,
                            where(source, line_no) + ": delta = 0 but m = " + m_cell + " exceeds the assay limit");
            }
            // Stored for completeness; censored values are never used.
            o.m = *v;
        }
        data.observations.push_back(std::move(o));
    }
    return data;
}

Dataset parse_csv(const std::filesystem::path& path, double assay_limit) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::IoError, path.string() + ": cannot open for reading");
    return parse_csv(in, assay_limit, path.string());
}

void write_csv(const Dataset& data, std::ostream& out) {
    const bool two_arm = data.has_treated();
    out << "y,m,delta";
    if (two_arm) out << ",a";
    for (const auto& name : data.covariate_names) out << "," << name;
    out << "\n";
    for (const auto& o : data.observations) {
        char buf[32];
        std::string m;
        if (o.delta == 1) {
            std::snprintf(buf, sizeof buf, "%.17g", o.m);
            m = buf;
        }
        out << o.y << "," << m << "," << o.delta;
        if (two_arm) out << "," << o.a;
        for (double c : o.c) {
            std::snprintf(buf, sizeof buf, "%.17g", c);
            out << "," << buf;
        }
        out << "\n";
    }
}

void write_csv(const Dataset& data, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::IoError, path.string() + ": cannot open for writing");
    write_csv(data, out);
}

std::vector<ConfigEntry> parse_config(std::istream& in, const std::string& source) {
    std::vector<ConfigEntry> out;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        const std::string body = trim(hash == std::string::npos ? line : line.substr(0, hash));
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos) {
            throw Error(ErrorKind::ConfigError, where(source, line_no) + ": expected 'key = value'");
        }
        ConfigEntry e{trim(body.substr(0, eq)), trim(body.substr(eq + 1)), source, line_no};
        if (e.key.empty()) throw Error(ErrorKind::ConfigError, where(source, line_no) + ": empty key");
        out.push_back(std::move(e));
    }
    return out;
}

std::vector<ConfigEntry> parse_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::IoError, path.string() + ": cannot open for reading");
    return parse_config(in, path.string());
}

}  // namespace censmed
