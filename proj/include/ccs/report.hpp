#pragma once

// Serialization of MomentReport: a versioned line-oriented text format, a
// JSON document and CSV rows. Doubles are written with 17 significant
// digits, so text and JSON both round-trip exactly.

#include <ccs/errors.hpp>
#include <ccs/moments.hpp>
#include <ccs/sequences.hpp>

#include <nlohmann/json.hpp>

#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <string>
#include <string_view>

namespace ccs {

inline constexpr std::string_view kReportFormat = "report_v1";

namespace detail {

inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline double parse_double(const std::string& s) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0')
        throw DomainError("report: malformed number '" + s + "'");
    return v;
}

inline ExactValue parse_exact(const std::string& s) {
    try {
        const auto slash = s.find('/');
        if (slash == std::string::npos)
            return ExactValue(BigInt(s));
        return ExactValue(BigRational(BigInt(s.substr(0, slash)), BigInt(s.substr(slash + 1))));
    } catch (const std::runtime_error&) {
        throw DomainError("report: malformed exact value '" + s + "'");
    }
}

} // namespace detail

/// Text layout:
///
///   report_v1
///   id <sequence id>
///   calibration_ratio <double>
///   max_relative_error <double>
///   rows <count>
///   <n> <exact> <numeric> <relative_error> <scheme>     (one per row)
///   end
inline std::string render_text(const MomentReport& r) {
    std::ostringstream out;
    out << kReportFormat << '\n'
        << "id " << to_string(r.id) << '\n'
        << "calibration_ratio " << detail::fmt_double(r.calibration_ratio) << '\n'
        << "max_relative_error " << detail::fmt_double(r.max_relative_error) << '\n'
        << "rows " << r.rows.size() << '\n';
    for (const auto& row : r.rows)
        out << row.n << ' ' << row.exact.str() << ' ' << detail::fmt_double(row.numeric) << ' '
            << detail::fmt_double(row.relative_error) << ' ' << row.scheme << '\n';
    out << "end\n";
    return out.str();
}

inline MomentReport parse_text(std::string_view text) {
    std::istringstream in{std::string(text)};
    auto expect_key = [&](const char* key) {
        std::string k, v;
        if (!(in >> k >> v) || k != key)
            throw DomainError(std::string("report: expected '") + key + "'");
        return v;
    };
    std::string header;
    if (!(in >> header) || header != kReportFormat)
        throw DomainError("report: unsupported format header '" + header + "'");
    MomentReport r;
    r.id = parse_sequence_id(expect_key("id"));
    r.calibration_ratio = detail::parse_double(expect_key("calibration_ratio"));
    r.max_relative_error = detail::parse_double(expect_key("max_relative_error"));
    const long count = std::strtol(expect_key("rows").c_str(), nullptr, 10);
    for (long i = 0; i < count; ++i) {
        MomentRow row;
        std::string exact, numeric, rel;
        if (!(in >> row.n >> exact >> numeric >> rel >> row.scheme))
            throw DomainError("report: truncated row " + std::to_string(i));
        row.exact = detail::parse_exact(exact);
        row.numeric = detail::parse_double(numeric);
        row.relative_error = detail::parse_double(rel);
        r.rows.push_back(std::move(row));
    }
    std::string tail;
    if (!(in >> tail) || tail != "end")
        throw DomainError("report: missing 'end'");
    return r;
}

inline nlohmann::json to_json(const MomentReport& r) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : r.rows)
        rows.push_back({{"n", row.n},
                        {"exact", row.exact.str()},
                        {"numeric", row.numeric},
                        {"relative_error", row.relative_error},
                        {"scheme", row.scheme}});
    return {{"format", kReportFormat},
            {"id", to_string(r.id)},
            {"rows", std::move(rows)},
            {"max_relative_error", r.max_relative_error},
            {"calibration_ratio", r.calibration_ratio}};
}

inline MomentReport from_json(const nlohmann::json& j) {
    try {
        if (j.at("format").get<std::string>() != kReportFormat)
            throw DomainError("report: unsupported format " + j.at("format").dump());
        MomentReport r;
        r.id = parse_sequence_id(j.at("id").get<std::string>());
        r.max_relative_error = j.at("max_relative_error").get<double>();
        r.calibration_ratio = j.at("calibration_ratio").get<double>();
        for (const auto& jr : j.at("rows")) {
            MomentRow row;
            row.n = jr.at("n").get<unsigned>();
            row.exact = detail::parse_exact(jr.at("exact").get<std::string>());
            row.numeric = jr.at("numeric").get<double>();
            row.relative_error = jr.at("relative_error").get<double>();
            row.scheme = jr.at("scheme").get<std::string>();
            r.rows.push_back(std::move(row));
        }
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("report: ") + e.what());
    }
}

inline std::string render_csv(const MomentReport& r) {
    std::ostringstream out;
    out << "id,n,exact,numeric,relative_error,scheme,calibration_ratio\n";
    const std::string id = to_string(r.id);
    for (const auto& row : r.rows)
        out << id << ',' << row.n << ',' << row.exact.str() << ','
            << detail::fmt_double(row.numeric) << ',' << detail::fmt_double(row.relative_error)
            << ',' << row.scheme << ',' << detail::fmt_double(r.calibration_ratio) << '\n';
    return out.str();
}

} // namespace ccs
