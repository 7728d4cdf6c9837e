#pragma once

// Plain-text file formats:
//   matrix  one row per line, comma-separated decimal reals, no header
//   signal  one real per line
//   trace   CSV with header iter,objective,feasibility,delta

#include "fixrank/hankel.hpp"
#include "fixrank/solver.hpp"

#include <charconv>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fixrank::io {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

inline double parse_real(std::string_view token, const std::string &where) {
    token = trim(token);
    if (!token.empty() && token.front() == '+') token.remove_prefix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (token.empty() || ec != std::errc() || ptr != token.data() + token.size() || !std::isfinite(value))
        throw ParseError(where + ": invalid number '" + std::string(token) + "'");
    return value;
}

inline std::vector<std::string_view> lines_of(std::string_view text) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto end = text.find('\n', pos);
        const auto line = text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
        out.push_back(line);
        if (end == std::string_view::npos) break;
        pos = end + 1;
    }
    return out;
}

} // namespace detail

inline Matrix parse_matrix(std::string_view text, const std::string &name = "matrix") {
    std::vector<std::vector<double>> rows;
    int lineno = 0;
    for (auto line : detail::lines_of(text)) {
        ++lineno;
        if (detail::trim(line).empty()) continue;
        std::vector<double> row;
        std::size_t pos = 0;
        while (true) {
            const auto comma = line.find(',', pos);
            row.push_back(detail::parse_real(line.substr(pos, comma == std::string_view::npos ? std::string_view::npos
                                                                                               : comma - pos),
                                             name + ":" + std::to_string(lineno)));
            if (comma == std::string_view::npos) break;
            pos = comma + 1;
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw ParseError(name + ":" + std::to_string(lineno) + ": expected " +
                             std::to_string(rows.front().size()) + " columns, got " + std::to_string(row.size()));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError(name + ": no rows");
    Matrix M(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j) M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    return M;
}

inline Signal parse_signal(std::string_view text, const std::string &name = "signal") {
    std::vector<double> values;
    int lineno = 0;
    for (auto line : detail::lines_of(text)) {
        ++lineno;
        if (detail::trim(line).empty()) continue;
        values.push_back(detail::parse_real(line, name + ":" + std::to_string(lineno)));
    }
    if (values.empty()) throw ParseError(name + ": no samples");
    return Signal(Vector(Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()))));
}

inline std::string format_real(double v) {
    std::ostringstream ss;
    ss << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
    return ss.str();
}

inline std::string format_matrix(const Matrix &M) {
    std::string out;
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        for (Eigen::Index j = 0; j < M.cols(); ++j) {
            if (j > 0) out += ',';
            out += format_real(M(i, j));
        }
        out += '\n';
    }
    return out;
}

inline std::string format_signal(const Signal &f) {
    std::string out;
    for (int t = 0; t < f.size(); ++t) out += format_real(f[t]) + '\n';
    return out;
}

inline std::string format_trace(const SolverTrace &trace) {
    std::string out = "iter,objective,feasibility,delta\n";
    for (const auto &r : trace.records)
        out += std::to_string(r.iter) + ',' + format_real(r.objective) + ',' + format_real(r.feasibility) + ',' +
               format_real(r.delta) + '\n';
    return out;
}

inline void write_file(const std::string &path, const std::string &contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << contents;
}

/// FNV-1a over the raw bytes of the inputs, as 16 hex digits.
inline std::string digest(const std::vector<std::string> &blobs) {
    std::uint64_t h = 14695981039346656037ull;
    for (const auto &blob : blobs) {
        for (unsigned char c : blob) {
            h ^= c;
            h *= 1099511628211ull;
        }
        h ^= 0xff; // separator so ("ab","c") and ("a","bc") differ
        h *= 1099511628211ull;
    }
    std::ostringstream ss;
    ss << std::hex << std::setw(16) << std::setfill('0') << h;
    return ss.str();
}

} // namespace fixrank::io
