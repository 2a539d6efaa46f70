#include "impcheck/bench.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

#include "impcheck/parser.hpp"

namespace impcheck::bench {

std::optional<Setting> parse_setting(const std::string& name, const cegar::Config& base) {
    Setting s;
    s.name = name;
    s.config = base;
    std::string core = name;
    bool enh = false;
    if (core.size() > 4 && core.substr(core.size() - 4) == "+enh") {
        enh = true;
        core = core.substr(0, core.size() - 4);
    }
    s.config.enhance = enh;
    if (core == "plain") {
        if (enh) return std::nullopt;
        s.config.use_ai = false;
        s.config.domain = domains::DomainKind::Interval;
        return s;
    }
    auto kind = domains::domain_from_string(core);
    if (!kind) return std::nullopt;
    s.config.use_ai = true;
    s.config.domain = *kind;
    return s;
}

std::vector<Setting> default_settings(const cegar::Config& base) {
    std::vector<Setting> out;
    for (const char* name : {"plain", "interval", "octagon", "congruence", "comp", "comp+enh"})
        out.push_back(*parse_setting(name, base));
    return out;
}

std::optional<std::string> read_expectation(const std::string& source) {
    std::istringstream in(source);
    std::string line;
    while (std::getline(in, line)) {
        auto pos = line.find("// @expect ");
        if (pos != std::string::npos) {
            std::string rest = line.substr(pos + 11);
            std::istringstream r(rest);
            std::string word;
            r >> word;
            if (word == "safe" || word == "unsafe") return word;
            return std::nullopt;
        }
        // Expectations live in the header comment block; stop at code.
        auto first = line.find_first_not_of(" \t\r");
        if (first != std::string::npos && line.compare(first, 2, "//") != 0) break;
    }
    return std::nullopt;
}

namespace {

SampleResult run_one(const std::string& file, const Setting& setting) {
    SampleResult row;
    row.file = file;
    row.setting = setting.name;

    std::ifstream in(file);
    if (!in) {
        row.verdict = "ERROR";
        return row;
    }
    std::stringstream buf;
    buf << in.rdbuf();
    std::string source = buf.str();

    auto expect = read_expectation(source);
    if (!expect) {
        row.verdict = "ERROR";
        return row;
    }
    row.expected = *expect;

    ProgramAutomaton pa;
    try {
        pa = lower(parse_program(source));
    } catch (const ParseError&) {
        row.verdict = "ERROR";
        return row;
    }

    auto [verdict, stats] = cegar::verify(pa, setting.config);
    row.wall_ms = stats.wall_ms;
    row.total_refinements = stats.total_refinements;
    row.ai_refinements = stats.ai_refinements;
    row.useful_ai_refinements = stats.useful_ai_refinements;
    switch (verdict.kind) {
        case cegar::Verdict::Kind::Safe: row.verdict = "SAFE"; break;
        case cegar::Verdict::Kind::Unsafe: row.verdict = "UNSAFE"; break;
        case cegar::Verdict::Kind::Unknown:
            row.verdict = "UNKNOWN";
            row.unknown_reason = verdict.unknown_reason;
            break;
    }
    if (row.verdict == "SAFE" || row.verdict == "UNSAFE") {
        std::string got = row.verdict == "SAFE" ? "safe" : "unsafe";
        row.success = got == row.expected;
        row.wrong = !row.success;
    }
    return row;
}

}  // namespace

BenchReport run_bench(const std::vector<std::string>& files,
                      const std::vector<Setting>& settings, int jobs) {
    BenchReport report;
    report.files = files;
    std::sort(report.files.begin(), report.files.end());
    for (const auto& s : settings) report.setting_names.push_back(s.name);

    size_t total = report.files.size() * settings.size();
    report.rows.resize(total);
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (;;) {
            size_t idx = next.fetch_add(1);
            if (idx >= total) return;
            size_t fi = idx / settings.size(), si = idx % settings.size();
            report.rows[idx] = run_one(report.files[fi], settings[si]);
        }
    };
    int n = std::max(1, jobs);
    std::vector<std::thread> pool;
    for (int i = 1; i < n; ++i) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    for (const auto& row : report.rows) {
        Tally& t = report.tallies[row.setting];
        if (row.wrong) report.any_wrong = true;
        if (row.success) ++t.success;
        else if (row.verdict == "ERROR" || row.wrong) ++t.error;
        else if (row.unknown_reason == "iteration-limit" || row.unknown_reason == "time-limit")
            ++t.timeout;
        else ++t.unknown;
    }
    for (size_t fi = 0; fi < report.files.size(); ++fi) {
        bool solved = false, any_error = false, any_timeout = false;
        for (size_t si = 0; si < settings.size(); ++si) {
            const auto& row = report.rows[fi * settings.size() + si];
            solved |= row.success;
            any_error |= row.verdict == "ERROR" || row.wrong;
            any_timeout |= row.unknown_reason == "iteration-limit" ||
                           row.unknown_reason == "time-limit";
        }
        if (solved) ++report.portfolio.success;
        else if (any_timeout) ++report.portfolio.timeout;
        else if (any_error) ++report.portfolio.error;
        else ++report.portfolio.unknown;
    }
    return report;
}

std::string BenchReport::table_text() const {
    std::ostringstream os;
    os << std::left << std::setw(16) << "Setting" << std::right << std::setw(9) << "Success"
       << std::setw(9) << "Timeout" << std::setw(7) << "Error" << std::setw(9) << "Unknown"
       << "\n";
    for (const auto& name : setting_names) {
        auto it = tallies.find(name);
        Tally t = it == tallies.end() ? Tally{} : it->second;
        os << std::left << std::setw(16) << name << std::right << std::setw(9) << t.success
           << std::setw(9) << t.timeout << std::setw(7) << t.error << std::setw(9) << t.unknown
           << "\n";
    }
    os << std::left << std::setw(16) << "Portfolio" << std::right << std::setw(9)
       << portfolio.success << std::setw(9) << portfolio.timeout << std::setw(7)
       << portfolio.error << std::setw(9) << portfolio.unknown << "\n";
    return os.str();
}

std::string BenchReport::csv_text() const {
    std::ostringstream os;
    os << "file,setting,verdict,expected,wall_ms,total_refinements,ai_refinements,"
          "useful_ai_refinements\n";
    for (const auto& r : rows) {
        os << r.file << "," << r.setting << "," << r.verdict << "," << r.expected << ","
           << std::fixed << std::setprecision(1) << r.wall_ms << "," << r.total_refinements
           << "," << r.ai_refinements << "," << r.useful_ai_refinements << "\n";
    }
    return os.str();
}

std::string BenchReport::series_csv_text() const {
    std::ostringstream os;
    os << "setting,metric,rank,value\n";
    for (const auto& name : setting_names) {
        std::vector<double> walls;
        std::vector<int> totals, ais, usefuls;
        for (const auto& r : rows) {
            if (r.setting != name) continue;
            walls.push_back(r.wall_ms);
            totals.push_back(r.total_refinements);
            ais.push_back(r.ai_refinements);
            usefuls.push_back(r.useful_ai_refinements);
        }
        std::sort(walls.begin(), walls.end());
        std::sort(totals.begin(), totals.end());
        std::sort(ais.begin(), ais.end());
        std::sort(usefuls.begin(), usefuls.end());
        for (size_t i = 0; i < walls.size(); ++i)
            os << name << ",wall_ms," << i << "," << std::fixed << std::setprecision(1)
               << walls[i] << "\n";
        for (size_t i = 0; i < totals.size(); ++i)
            os << name << ",total_refinements," << i << "," << totals[i] << "\n";
        for (size_t i = 0; i < ais.size(); ++i)
            os << name << ",ai_refinements," << i << "," << ais[i] << "\n";
        for (size_t i = 0; i < usefuls.size(); ++i)
            os << name << ",useful_ai_refinements," << i << "," << usefuls[i] << "\n";
    }
    return os.str();
}

}  // namespace impcheck::bench
