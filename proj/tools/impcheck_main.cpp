// Command line front end: verify a single program or run an expectation-
// annotated corpus across solver settings.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "impcheck/bench.hpp"
#include "impcheck/cegar.hpp"
#include "impcheck/parser.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace impcheck;

namespace {

struct CommonFlags {
    std::string domain = "comp";
    bool enhance = true;
    bool no_ai = false;
    int widen_delay = 3;
    int disjuncts = 1;
    int max_iter = 200;
    double timeout = 90.0;
    int64_t solver_budget = 10000;
    bool pp_by_label = false;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--domain", f.domain, "Abstract domain: interval|octagon|congruence|comp")
        ->check(CLI::IsMember({"interval", "octagon", "congruence", "comp"}));
    cmd->add_flag("--enhance,!--no-enhance", f.enhance,
                  "Add every Hoare-valid edge to data automata (default on)");
    cmd->add_flag("--no-ai", f.no_ai, "Plain trace abstraction, no abstract interpretation");
    cmd->add_option("--widen-delay", f.widen_delay, "Joins before widening")->check(CLI::PositiveNumber);
    cmd->add_option("--disjuncts", f.disjuncts, "Disjunct cap per location")->check(CLI::PositiveNumber);
    cmd->add_option("--max-iter", f.max_iter, "Refinement iteration limit")->check(CLI::PositiveNumber);
    cmd->add_option("--timeout", f.timeout, "Per-task time limit in seconds")->check(CLI::PositiveNumber);
    cmd->add_option("--solver-budget", f.solver_budget, "Integer search nodes per solver call")
        ->check(CLI::PositiveNumber);
    cmd->add_flag("--pp-by-label", f.pp_by_label,
                  "Path programs keep every edge whose label occurs in the trace");
}

cegar::Config to_config(const CommonFlags& f) {
    cegar::Config c;
    c.domain = *domains::domain_from_string(f.domain);
    c.enhance = f.enhance;
    c.use_ai = !f.no_ai;
    c.widen_delay = f.widen_delay;
    c.disjunct_cap = f.disjuncts;
    c.max_iterations = f.max_iter;
    c.time_limit_seconds = f.timeout;
    c.solver_budget = f.solver_budget;
    c.pp_by_label = f.pp_by_label;
    return c;
}

json iteration_json(const cegar::IterationRecord& rec) {
    return json{{"iter", rec.iter},
                {"trace_len", rec.trace_len},
                {"has_loop", rec.has_loop},
                {"cache_hit", rec.cache_hit},
                {"ai_used", rec.ai_used},
                {"ai_safe", rec.ai_safe},
                {"a_d_states", rec.a_d_states}};
}

int cmd_verify(const std::string& file, const CommonFlags& flags, const std::string& stats_path,
               const std::string& dot_dir, bool verbose) {
    std::ifstream in(file);
    if (!in) {
        std::cerr << "error: cannot open " << file << "\n";
        return 3;
    }
    std::stringstream buf;
    buf << in.rdbuf();

    ProgramAutomaton pa;
    try {
        pa = lower(parse_program(buf.str()));
    } catch (const ParseError& e) {
        std::cerr << "error: " << file << ": " << e.what() << "\n";
        return 3;
    }

    auto [verdict, stats] = cegar::verify(pa, to_config(flags));

    if (verbose) {
        for (const auto& rec : stats.iterations) std::cerr << iteration_json(rec).dump() << "\n";
    }

    std::string verdict_name;
    int code = 2;
    switch (verdict.kind) {
        case cegar::Verdict::Kind::Safe:
            verdict_name = "SAFE";
            code = 0;
            break;
        case cegar::Verdict::Kind::Unsafe:
            verdict_name = "UNSAFE";
            code = 1;
            break;
        case cegar::Verdict::Kind::Unknown:
            verdict_name = "UNKNOWN";
            code = 2;
            break;
    }
    std::cout << verdict_name << " " << file << "\n";
    if (verdict.kind == cegar::Verdict::Kind::Unknown)
        std::cerr << "reason: " << verdict.unknown_reason << "\n";

    if (verdict.counterexample) {
        std::string cex_path = file + ".cex";
        std::ofstream cex(cex_path);
        const auto& c = *verdict.counterexample;
        cex << "# feasible error trace\n";
        for (size_t i = 0; i < c.trace.size(); ++i) {
            cex << "# state:";
            for (const auto& [v, val] : c.execution.states[i]) cex << " " << v << "=" << val;
            cex << "\n" << c.trace[i].text() << "\n";
        }
        cex << "# state:";
        for (const auto& [v, val] : c.execution.states.back()) cex << " " << v << "=" << val;
        cex << "\n";
        std::cerr << "counterexample written to " << cex_path << "\n";
    }

    if (!stats_path.empty()) {
        json j{{"verdict", verdict_name},
               {"total_refinements", stats.total_refinements},
               {"ai_refinements", stats.ai_refinements},
               {"useful_ai_refinements", stats.useful_ai_refinements},
               {"wall_ms", stats.wall_ms}};
        j["iterations"] = json::array();
        for (size_t i = 0; i < stats.iterations.size(); ++i) {
            json rec = iteration_json(stats.iterations[i]);
            if (i + 1 == stats.iterations.size()) rec["verdict"] = verdict_name;
            j["iterations"].push_back(std::move(rec));
        }
        if (!verdict.unknown_reason.empty()) j["unknown_reason"] = verdict.unknown_reason;
        std::ofstream out(stats_path);
        out << j.dump(2) << "\n";
    }

    if (!dot_dir.empty()) {
        fs::create_directories(dot_dir);
        std::ofstream(fs::path(dot_dir) / "a_p.dot") << to_dot(pa);
        std::ofstream(fs::path(dot_dir) / "a_d.dot") << automata::to_dot(stats.data_automaton);
    }
    return code;
}

int cmd_bench(const std::string& dir, const CommonFlags& flags, const std::string& settings_csv,
              int jobs, const std::string& csv_path, const std::string& series_path) {
    std::vector<std::string> files;
    std::error_code ec;
    for (const auto& entry : fs::directory_iterator(dir, ec)) {
        if (entry.is_regular_file() && entry.path().extension() == ".imp")
            files.push_back(entry.path().string());
    }
    if (ec || files.empty()) {
        std::cerr << "error: no .imp files under " << dir << "\n";
        return 3;
    }

    cegar::Config base = to_config(flags);
    std::vector<bench::Setting> settings;
    if (settings_csv.empty()) {
        settings = bench::default_settings(base);
    } else {
        std::istringstream ss(settings_csv);
        std::string name;
        while (std::getline(ss, name, ',')) {
            auto s = bench::parse_setting(name, base);
            if (!s) {
                std::cerr << "error: unknown setting '" << name << "'\n";
                return 3;
            }
            settings.push_back(std::move(*s));
        }
    }

    bench::BenchReport report = bench::run_bench(files, settings, jobs);
    std::cout << report.table_text();
    if (!csv_path.empty()) std::ofstream(csv_path) << report.csv_text();
    if (!series_path.empty()) std::ofstream(series_path) << report.series_csv_text();

    if (report.any_wrong) {
        for (const auto& r : report.rows)
            if (r.wrong)
                std::cerr << "wrong verdict: " << r.file << " [" << r.setting << "] produced "
                          << r.verdict << " but expected " << r.expected << "\n";
        return 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"impcheck - a software model checker for a small integer language"};
    app.require_subcommand(1);

    CommonFlags vflags, bflags;
    std::string file, stats_path, dot_dir;
    bool verbose = false;
    CLI::App* verify = app.add_subcommand("verify", "Verify one program");
    verify->add_option("file", file, "Program file (.imp)")->required();
    add_common(verify, vflags);
    verify->add_option("--stats", stats_path, "Write run statistics as JSON");
    verify->add_option("--dot", dot_dir, "Write program/data automata as DOT into a directory");
    verify->add_flag("-v,--verbose", verbose, "Per-iteration JSON lines on stderr");

    std::string dir, settings_csv, csv_path, series_path;
    int jobs = static_cast<int>(std::thread::hardware_concurrency());
    if (jobs <= 0) jobs = 1;
    CLI::App* bench_cmd = app.add_subcommand("bench", "Run an expectation-annotated corpus");
    bench_cmd->add_option("dir", dir, "Directory with .imp files")->required();
    add_common(bench_cmd, bflags);
    bench_cmd->add_option("--settings", settings_csv,
                          "Comma list of settings (plain, interval, octagon+enh, ...)");
    bench_cmd->add_option("--jobs", jobs, "Parallel samples")->check(CLI::PositiveNumber);
    bench_cmd->add_option("--csv", csv_path, "Write per-sample results CSV");
    bench_cmd->add_option("--series", series_path, "Write sorted measurement series CSV");

    CLI11_PARSE(app, argc, argv);

    try {
        if (verify->parsed()) return cmd_verify(file, vflags, stats_path, dot_dir, verbose);
        return cmd_bench(dir, bflags, settings_csv, jobs, csv_path, series_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
