#pragma once

#include <vector>

#include "impcheck/domains.hpp"
#include "impcheck/program_automaton.hpp"

namespace impcheck::fixpoint {

struct AnalyzeOptions {
    domains::DomainKind kind = domains::DomainKind::Interval;
    int widen_delay = 3;    // plain joins before widening kicks in
    int disjunct_cap = 1;   // 1 = pure join
    int narrow_sweeps = 4;  // descending in-place sweeps (stops when stable)
};

// Per-location disjunct sets. An absent/empty set is unreachable (bottom).
struct Annotation {
    std::vector<std::vector<domains::AbstractState>> disjuncts;

    bool reached(int loc) const {
        return loc < static_cast<int>(disjuncts.size()) && !disjuncts[loc].empty();
    }
    // Join of the location's disjuncts (bottom when unreachable).
    domains::AbstractState joined(int loc, domains::DomainKind kind,
                                  const domains::VarSetPtr& vars) const;
    Predicate predicate_at(int loc) const;  // disjunction over disjuncts
};

struct AnalyzeStats {
    long location_visits = 0;
    long widenings = 0;
};

// Worklist fixpoint over the automaton: reverse post-order iteration,
// widening at back-edge targets after `widen_delay` updates, bounded
// disjunction, then descending sweeps. The result is inductive.
Annotation analyze(const ProgramAutomaton& pa, const AnalyzeOptions& opts,
                   AnalyzeStats* stats = nullptr);

// True iff no error location is reachable in the annotation.
bool is_safe(const Annotation& ann, const ProgramAutomaton& pa);

// Inductiveness audit: post of every disjunct along every edge stays below
// the join of the successor's disjuncts.
bool audit_inductive(const Annotation& ann, const ProgramAutomaton& pa,
                     const AnalyzeOptions& opts);

// Iteration ceiling used by the termination assertion (per domain chain
// heights).
long chain_bound(domains::DomainKind kind, size_t num_vars);

}  // namespace impcheck::fixpoint
