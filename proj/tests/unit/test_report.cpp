#include <ccs/report.hpp>

#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace ccs;

namespace {

double any_double(gen::Source& src) {
    switch (src.integer(0, 4)) {
    case 0: return 0.0;
    case 1: return std::ldexp(src.uniform(0.5, 1.0), src.integer(-1074, 1023));
    case 2: return std::numeric_limits<double>::denorm_min() * src.integer(1, 1000);
    case 3: return src.uniform(0.0, 1e-8);
    default: return src.uniform(0.0, 1e6);
    }
}

MomentReport any_report(gen::Source& src) {
    static const char* ids[] = {"ex1", "ex4", "ex9", "ex10", "bell", "product:catalan*bell"};
    static const char* schemes[] = {"substitution_sqrt", "double_exponential", "jacobi(-0.5;0.5)",
                                    "truncated_de(0)", "discrete_atoms+origin_atom"};
    MomentReport r;
    r.id = parse_sequence_id(ids[src.integer(0, 5)]);
    r.calibration_ratio = any_double(src);
    const int count = src.integer(0, 15);
    for (int n = 0; n < count; ++n) {
        MomentRow row;
        row.n = n;
        BigInt num = 1;
        for (int i = src.integer(0, 8); i > 0; --i)
            num *= src.integer(1, 1 << 30);
        row.exact = src.integer(0, 3) == 0 ? ExactValue(BigRational(num, src.integer(1, 97)))
                                           : ExactValue(num);
        row.numeric = any_double(src);
        row.relative_error = any_double(src);
        row.scheme = schemes[src.integer(0, 4)];
        r.max_relative_error = std::max(r.max_relative_error, row.relative_error);
        r.rows.push_back(row);
    }
    return r;
}

} // namespace

TEST(Report, TextRoundTrip) {
    gen::Source src(6);
    for (int i = 0; i < 300; ++i) {
        const MomentReport r = any_report(src);
        const std::string text = render_text(r);
        EXPECT_EQ(parse_text(text), r) << text;
        EXPECT_EQ(render_text(parse_text(text)), text);
    }
}

TEST(Report, JsonRoundTrip) {
    gen::Source src(7);
    for (int i = 0; i < 300; ++i) {
        const MomentReport r = any_report(src);
        const std::string doc = to_json(r).dump();
        EXPECT_EQ(from_json(nlohmann::json::parse(doc)), r) << doc;
    }
}

TEST(Report, JsonFields) {
    gen::Source src(8);
    MomentReport r = any_report(src);
    const auto j = to_json(r);
    EXPECT_EQ(j.at("format"), "report_v1");
    for (const char* key : {"id", "rows", "max_relative_error", "calibration_ratio"})
        EXPECT_TRUE(j.contains(key)) << key;
    EXPECT_EQ(j.at("rows").size(), r.rows.size());
}

TEST(Report, CsvHeaderAndRows) {
    gen::Source src(9);
    MomentReport r = any_report(src);
    while (r.rows.empty())
        r = any_report(src);
    const std::string csv = render_csv(r);
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "id,n,exact,numeric,relative_error,scheme,calibration_ratio");
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        EXPECT_EQ(std::count(line.begin(), line.end(), ','), 6) << line;
        ++rows;
    }
    EXPECT_EQ(rows, r.rows.size());
}

TEST(Report, RejectsMalformedInput) {
    EXPECT_THROW(parse_text("report_v0\n"), DomainError);
    EXPECT_THROW(parse_text("report_v1\nid ex1\ncalibration_ratio 1\nmax_relative_error x\n"),
                 DomainError);
    EXPECT_THROW(parse_text("report_v1\nid ex1\ncalibration_ratio 1\nmax_relative_error 0\nrows 2\n"
                            "0 1 1 0 s\n"),
                 DomainError);
    EXPECT_THROW(from_json(nlohmann::json{{"format", "report_v2"}}), DomainError);
    EXPECT_THROW(from_json(nlohmann::json{{"format", "report_v1"}}), DomainError);
}
