#pragma once

// Machine-readable command reports.
//
//   {
//     "command": "eval" | "prox" | "minimizers" | "hankel-approx" | "compare",
//     "input_digest": "<16 hex digits, FNV-1a of the input files>",
//     "parameters": { "K": ..., "rho": ..., ... },
//     "results": { ... command specific ... }
//   }
//
// Reals are emitted in the shortest form that parses back to the same double.
// JSON has no infinities, so non-finite reals are the strings "inf", "-inf"
// and "nan"; use decode_real to read any real-valued field.

#include "fixrank/spectrum.hpp"

#include <json.hpp>

#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace fixrank {

using Json = nlohmann::json;

inline Json encode_real(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

inline double decode_real(const Json &j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    }
    throw std::invalid_argument("decode_real: not a real: " + j.dump());
}

inline Json encode_vector(const Vector &v) {
    Json out = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(encode_real(v[i]));
    return out;
}

inline Vector decode_vector(const Json &j) {
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = decode_real(j[i]);
    return v;
}

inline Json encode_matrix(const Matrix &M) {
    Json out = Json::array();
    for (Eigen::Index i = 0; i < M.rows(); ++i) out.push_back(encode_vector(M.row(i).transpose()));
    return out;
}

inline Matrix decode_matrix(const Json &j) {
    if (j.empty()) return {};
    Matrix M(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(j[0].size()));
    for (std::size_t i = 0; i < j.size(); ++i) M.row(static_cast<Eigen::Index>(i)) = decode_vector(j[i]).transpose();
    return M;
}

struct Report {
    std::string command;
    std::string input_digest;
    Json parameters = Json::object();
    Json results = Json::object();

    [[nodiscard]] std::string dump() const { return to_json().dump(2) + "\n"; }

    [[nodiscard]] Json to_json() const {
        return {{"command", command}, {"input_digest", input_digest}, {"parameters", parameters}, {"results", results}};
    }

    static Report from_json(const Json &j) {
        return {j.at("command").get<std::string>(), j.at("input_digest").get<std::string>(), j.at("parameters"),
                j.at("results")};
    }

    static Report parse(const std::string &text) { return from_json(Json::parse(text)); }

    friend bool operator==(const Report &a, const Report &b) {
        return a.command == b.command && a.input_digest == b.input_digest && a.parameters == b.parameters &&
               a.results == b.results;
    }
};

} // namespace fixrank
