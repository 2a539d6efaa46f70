#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "impcheck/cegar.hpp"

namespace impcheck::bench {

struct Setting {
    std::string name;
    cegar::Config config;
};

// "plain" (no abstract interpretation) or a domain name, optionally with a
// "+enh" suffix: interval, octagon+enh, ...
std::optional<Setting> parse_setting(const std::string& name, const cegar::Config& base);

std::vector<Setting> default_settings(const cegar::Config& base);

// First "// @expect safe" or "// @expect unsafe" header comment.
std::optional<std::string> read_expectation(const std::string& source);

struct SampleResult {
    std::string file;
    std::string setting;
    std::string verdict = "ERROR";  // SAFE | UNSAFE | UNKNOWN | ERROR
    std::string expected;           // safe | unsafe | empty when missing
    std::string unknown_reason;
    double wall_ms = 0.0;
    int total_refinements = 0;
    int ai_refinements = 0;
    int useful_ai_refinements = 0;
    bool success = false;
    bool wrong = false;  // produced verdict contradicts the expectation
};

struct Tally {
    int success = 0, timeout = 0, error = 0, unknown = 0;
};

struct BenchReport {
    std::vector<std::string> files;
    std::vector<std::string> setting_names;
    std::vector<SampleResult> rows;  // file-major, then setting order
    std::map<std::string, Tally> tallies;
    Tally portfolio;
    bool any_wrong = false;

    std::string table_text() const;
    std::string csv_text() const;
    std::string series_csv_text() const;  // per-setting sorted series
};

BenchReport run_bench(const std::vector<std::string>& files,
                      const std::vector<Setting>& settings, int jobs);

}  // namespace impcheck::bench
