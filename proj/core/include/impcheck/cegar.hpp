#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "impcheck/automata.hpp"
#include "impcheck/domains.hpp"
#include "impcheck/program_automaton.hpp"
#include "impcheck/refine.hpp"
#include "impcheck/semantics.hpp"

namespace impcheck::cegar {

struct Config {
    domains::DomainKind domain = domains::DomainKind::Comp;
    bool use_ai = true;       // false: plain trace abstraction
    bool enhance = true;
    int widen_delay = 3;
    int disjunct_cap = 1;
    int max_iterations = 200;
    double time_limit_seconds = 90.0;
    int64_t solver_budget = 10000;
    bool pp_by_label = false;
    size_t enhance_budget = 5000;
    size_t closure_budget = 8000;
    bool audit = false;  // Hoare-audit every refinement automaton inline
};

struct Counterexample {
    Word trace;
    Execution execution;
};

struct Verdict {
    enum class Kind { Safe, Unsafe, Unknown };
    Kind kind = Kind::Unknown;
    std::optional<Counterexample> counterexample;  // set for Unsafe
    std::string unknown_reason;  // solver-budget | iteration-limit | time-limit
};

struct IterationRecord {
    int iter = 0;
    size_t trace_len = 0;
    bool has_loop = false;
    bool cache_hit = false;
    bool ai_used = false;
    bool ai_safe = false;
    bool refined = false;
    size_t a_d_states = 0;
    Word word;
    bool rejected_by_old = false;
    bool accepted_by_new = false;
};

struct RunStats {
    int total_refinements = 0;
    int ai_refinements = 0;
    int useful_ai_refinements = 0;
    double wall_ms = 0.0;
    size_t hoare_violations = 0;
    std::vector<IterationRecord> iterations;
    automata::FloydHoareAutomaton data_automaton;  // final A_D
};

std::pair<Verdict, RunStats> verify(const ProgramAutomaton& pa, const Config& config);

// Strict progress: every counterexample was rejected by the previous data
// automaton and is accepted by the automaton added for it.
bool progress_audit(const std::vector<IterationRecord>& log);

}  // namespace impcheck::cegar
