#include "impcheck/cegar.hpp"

#include <chrono>

#include "impcheck/fixpoint.hpp"
#include "impcheck/linsolve.hpp"
#include "impcheck/pathprog.hpp"

namespace impcheck::cegar {

using automata::FloydHoareAutomaton;
using Clock = std::chrono::steady_clock;

std::pair<Verdict, RunStats> verify(const ProgramAutomaton& pa, const Config& config) {
    Verdict verdict;
    RunStats stats;
    auto started = Clock::now();
    auto elapsed_s = [&] {
        return std::chrono::duration<double>(Clock::now() - started).count();
    };
    auto finish = [&](Verdict v) {
        stats.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - started).count();
        return std::make_pair(std::move(v), std::move(stats));
    };

    refine::RefineOptions ropts;
    ropts.solver.node_budget = config.solver_budget;
    ropts.closure_budget = config.closure_budget;
    ropts.enhance_budget = config.enhance_budget;
    ropts.step_cache =
        std::make_shared<std::map<std::pair<std::string, std::string>, Predicate>>();

    fixpoint::AnalyzeOptions fxopts;
    fxopts.kind = config.domain;
    fxopts.widen_delay = config.widen_delay;
    fxopts.disjunct_cap = config.disjunct_cap;

    std::vector<Statement> alphabet = pa.alphabet();
    FloydHoareAutomaton data;  // empty: accepts nothing
    pathprog::PathProgramCache cache;

    for (int iter = 1; iter <= config.max_iterations; ++iter) {
        if (elapsed_s() > config.time_limit_seconds) {
            verdict.kind = Verdict::Kind::Unknown;
            verdict.unknown_reason = "time-limit";
            return finish(verdict);
        }

        auto cex = automata::inclusion_counterexample(pa, data);
        if (!cex) {
            verdict.kind = Verdict::Kind::Safe;
            stats.data_automaton = std::move(data);
            return finish(verdict);
        }

        IterationRecord rec;
        rec.iter = iter;
        rec.word = cex->word;
        rec.trace_len = cex->word.size();
        rec.rejected_by_old = !automata::accepts(data, cex->word);

        auto result = refine::analyze_trace(cex->word, pa.vars, ropts);
        if (std::holds_alternative<refine::Feasible>(result)) {
            auto& f = std::get<refine::Feasible>(result);
            verdict.kind = Verdict::Kind::Unsafe;
            verdict.counterexample = Counterexample{cex->word, std::move(f.execution)};
            stats.iterations.push_back(std::move(rec));
            stats.data_automaton = std::move(data);
            return finish(verdict);
        }
        if (std::holds_alternative<refine::TraceUnknown>(result)) {
            verdict.kind = Verdict::Kind::Unknown;
            verdict.unknown_reason = "solver-budget";
            stats.iterations.push_back(std::move(rec));
            stats.data_automaton = std::move(data);
            return finish(verdict);
        }

        const auto& seq = std::get<refine::Infeasible>(result).sequence;
        ++stats.total_refinements;
        rec.refined = true;

        FloydHoareAutomaton refinement;
        bool have_refinement = false;
        rec.has_loop = pathprog::has_loop(*cex, pa);
        if (config.use_ai && rec.has_loop) {
            pathprog::ExtractOptions popts;
            popts.by_label = config.pp_by_label;
            pathprog::PathProgram pp = pathprog::extract(*cex, pa, popts);
            if (cache.seen_before(pp)) {
                rec.cache_hit = true;
            } else {
                rec.ai_used = true;
                ++stats.ai_refinements;
                fixpoint::Annotation ann = fixpoint::analyze(pp.automaton, fxopts);
                cache.remember(pp);
                if (fixpoint::is_safe(ann, pp.automaton)) {
                    rec.ai_safe = true;
                    FloydHoareAutomaton candidate = refine::automaton_from_pathprogram(
                        pp, ann, config.enhance, fxopts, alphabet, ropts);
                    if (automata::accepts(candidate, cex->word)) {
                        ++stats.useful_ai_refinements;
                        refinement = std::move(candidate);
                        have_refinement = true;
                    }
                    // A path-program automaton that misses its own trace
                    // would break progress; fall through to the sequence
                    // construction in that case.
                }
            }
        }
        if (!have_refinement)
            refinement = refine::automaton_from_sequence(cex->word, seq, alphabet, ropts);

        if (config.audit)
            stats.hoare_violations += refine::audit_automaton(refinement, ropts).size();

        rec.accepted_by_new = automata::accepts(refinement, cex->word);
        data = automata::fh_union(data, refinement);
        rec.a_d_states = static_cast<size_t>(data.num_states);
        stats.iterations.push_back(std::move(rec));
    }

    verdict.kind = Verdict::Kind::Unknown;
    verdict.unknown_reason = "iteration-limit";
    stats.data_automaton = std::move(data);
    return finish(verdict);
}

bool progress_audit(const std::vector<IterationRecord>& log) {
    for (const auto& rec : log) {
        if (!rec.refined) continue;
        if (!rec.rejected_by_old || !rec.accepted_by_new) return false;
    }
    return true;
}

}  // namespace impcheck::cegar
