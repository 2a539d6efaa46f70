#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "helpers.hpp"
#include "impcheck/bench.hpp"

using namespace impcheck;
using namespace impcheck::bench;

namespace {

struct TempFile {
    std::string path;
    TempFile(const std::string& name, const std::string& content)
        : path("/tmp/impcheck_test_" + name) {
        std::ofstream(path) << content;
    }
    ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("expectation headers parse") {
    CHECK(read_expectation("// @expect safe\nvar x;\n") == "safe");
    CHECK(read_expectation("// comment\n// @expect unsafe\nvar x;\n") == "unsafe");
    CHECK_FALSE(read_expectation("var x;\n// @expect safe\n").has_value());
    CHECK_FALSE(read_expectation("// @expect maybe\n").has_value());
    CHECK_FALSE(read_expectation("var x;\n").has_value());
}

TEST_CASE("setting names parse to configurations") {
    cegar::Config base;
    auto plain = parse_setting("plain", base);
    REQUIRE(plain.has_value());
    CHECK_FALSE(plain->config.use_ai);

    auto oct = parse_setting("octagon", base);
    REQUIRE(oct.has_value());
    CHECK(oct->config.use_ai);
    CHECK(oct->config.domain == domains::DomainKind::Octagon);
    CHECK_FALSE(oct->config.enhance);

    auto comp_enh = parse_setting("comp+enh", base);
    REQUIRE(comp_enh.has_value());
    CHECK(comp_enh->config.enhance);

    CHECK_FALSE(parse_setting("polyhedra", base).has_value());
    CHECK_FALSE(parse_setting("plain+enh", base).has_value());
}

TEST_CASE("bench counts verdicts per setting and portfolio") {
    TempFile a("a.imp", "// @expect safe\nvar x;\nx := 1;\nassert(x == 1);\n");
    TempFile b("b.imp", "// @expect unsafe\nvar x;\nx := 1;\nassert(x == 2);\n");
    TempFile c("c.imp", "// @expect safe\nvar x;\nhavoc x;\nassert(x == x);\n");

    cegar::Config base;
    std::vector<Setting> settings{*parse_setting("plain", base),
                                  *parse_setting("interval", base)};
    BenchReport report = run_bench({a.path, b.path, c.path}, settings, 2);

    CHECK(report.rows.size() == 6);
    CHECK_FALSE(report.any_wrong);
    for (const auto& name : {"plain", "interval"}) {
        const Tally& t = report.tallies.at(name);
        CHECK(t.success == 3);
        CHECK(t.error == 0);
        CHECK(t.success + t.timeout + t.error + t.unknown == 3);
    }
    CHECK(report.portfolio.success == 3);
    for (const auto& [name, t] : report.tallies)
        CHECK(report.portfolio.success >= t.success);

    std::string csv = report.csv_text();
    CHECK(csv.find("file,setting,verdict,expected,wall_ms,total_refinements,"
                   "ai_refinements,useful_ai_refinements") == 0);
    std::string series = report.series_csv_text();
    CHECK(series.find("setting,metric,rank,value") == 0);
    CHECK(report.table_text().find("Portfolio") != std::string::npos);
}

TEST_CASE("wrong verdicts poison the whole run") {
    TempFile lie("lie.imp", "// @expect unsafe\nvar x;\nx := 1;\nassert(x == 1);\n");
    cegar::Config base;
    BenchReport report = run_bench({lie.path}, {*parse_setting("interval", base)}, 1);
    CHECK(report.any_wrong);
    CHECK(report.tallies.at("interval").error == 1);
}

TEST_CASE("missing expectations count as errors") {
    TempFile nohdr("nohdr.imp", "var x;\nx := 1;\nassert(x == 1);\n");
    cegar::Config base;
    BenchReport report = run_bench({nohdr.path}, {*parse_setting("interval", base)}, 1);
    CHECK_FALSE(report.any_wrong);
    CHECK(report.tallies.at("interval").error == 1);
}

TEST_CASE("parse failures count as errors") {
    TempFile bad("bad.imp", "// @expect safe\nvar x;\nx := ;\n");
    cegar::Config base;
    BenchReport report = run_bench({bad.path}, {*parse_setting("interval", base)}, 1);
    CHECK(report.tallies.at("interval").error == 1);
}
