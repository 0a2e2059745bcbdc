#pragma once

// CSV and JSON serialization. Numbers are written with 17 significant digits
// through std::to_chars, so output never depends on the C locale.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "equidist.hpp"

namespace cotsum {

inline std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

inline void write_figure_csv(std::ostream& os, const std::vector<ScanPoint>& pts) {
    os << "r,c0\n";
    for (const auto& p : pts) os << p.r << ',' << format_number(p.c0) << '\n';
}

struct AsymptRow {
    std::int64_t b = 0;
    bool below_threshold = false;
    double exact = 0.0;
    double main = 0.0;
    double residual = 0.0;
    double scaled_residual = 0.0;
};

// Rows below the 6N threshold keep b and the exact value; the other fields are left empty.
inline void write_asympt_csv(std::ostream& os, const std::vector<AsymptRow>& rows) {
    os << "b,exact,main,residual,scaled_residual\n";
    for (const auto& r : rows) {
        os << r.b << ',' << format_number(r.exact) << ',';
        if (r.below_threshold)
            os << ",,\n";
        else
            os << format_number(r.main) << ',' << format_number(r.residual) << ','
               << format_number(r.scaled_residual) << '\n';
    }
}

inline nlohmann::json to_json(const ScanReport& r) {
    nlohmann::json j;
    j["b"] = r.b;
    j["a0"] = r.a0;
    j["a1"] = r.a1;
    j["phi"] = r.phi;
    j["count"] = r.count;
    j["moments_c0"] = r.moments_c0;
    j["moments_q"] = r.moments_q;
    j["ks_distance"] = r.ks_distance ? nlohmann::json(*r.ks_distance) : nlohmann::json(nullptr);
    j["wall_ms"] = r.wall_ms;
    return j;
}

// Restores the serialized fields; the per-r CDF is not part of the report file.
inline ScanReport scan_report_from_json(const nlohmann::json& j) {
    ScanReport r;
    r.b = j.at("b").get<std::int64_t>();
    r.a0 = j.at("a0").get<double>();
    r.a1 = j.at("a1").get<double>();
    r.phi = j.at("phi").get<std::int64_t>();
    r.count = j.at("count").get<std::int64_t>();
    r.moments_c0 = j.at("moments_c0").get<std::vector<double>>();
    r.moments_q = j.at("moments_q").get<std::vector<double>>();
    if (!j.at("ks_distance").is_null()) r.ks_distance = j.at("ks_distance").get<double>();
    r.wall_ms = j.at("wall_ms").get<double>();
    return r;
}

inline bool same_serialized_fields(const ScanReport& a, const ScanReport& b) {
    return a.b == b.b && a.a0 == b.a0 && a.a1 == b.a1 && a.phi == b.phi && a.count == b.count &&
           a.moments_c0 == b.moments_c0 && a.moments_q == b.moments_q && a.ks_distance == b.ks_distance &&
           a.wall_ms == b.wall_ms;
}

}  // namespace cotsum
