#pragma once

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "impcheck/automata.hpp"
#include "impcheck/fixpoint.hpp"
#include "impcheck/linsolve.hpp"
#include "impcheck/pathprog.hpp"
#include "impcheck/semantics.hpp"

namespace impcheck::refine {

struct RefineOptions {
    linsolve::SolverOptions solver;
    size_t closure_budget = 8000;  // |Q|^2 * |Σ| exact checks for generalization
    size_t enhance_budget = 5000;  // abstract checks for enhancement
    size_t simplify_atom_limit = 12;

    // Optional per-run memo for simplified postcondition steps, keyed by
    // (predicate text, statement text). Counterexample traces share long
    // prefixes across CEGAR iterations; the refiner passes one cache for
    // the whole run.
    std::shared_ptr<std::map<std::pair<std::string, std::string>, Predicate>> step_cache;
};

// Strongest postcondition on the linear fragment. Assume conjoins and
// prunes unsatisfiable cubes; assignments rename through a primed copy and
// project it away; havoc projects the variable.
Predicate sp(const Predicate& phi, const Statement& s, const RefineOptions& opts = {});

// Predicates aligned with a trace: preds.size() == trace.size() + 1,
// preds[0] = true. Proves infeasibility iff the tail is false.
struct AssertionSequence {
    std::vector<Predicate> preds;
    size_t first_false = 0;  // preds.size() when no false entry
};

struct Feasible {
    Execution execution;
    std::vector<Int> havoc_schedule;
};
struct Infeasible {
    AssertionSequence sequence;
};
struct TraceUnknown {
    std::string reason;
};
using TraceResult = std::variant<Feasible, Infeasible, TraceUnknown>;

// Feasibility of a single trace: strongest postconditions for refutation,
// an SSA path formula for the witness model.
TraceResult analyze_trace(const Word& trace, const std::vector<std::string>& vars,
                          const RefineOptions& opts = {});

// {pre} s {post} in exact mode: entails(sp(pre, s), post).
linsolve::Tri check_hoare(const Predicate& pre, const Statement& s, const Predicate& post,
                          const RefineOptions& opts = {});

// Abstract mode: leq(post(a, s), b). Never unknown.
bool check_hoare_abstract(const domains::AbstractState& a, const Statement& s,
                          const domains::AbstractState& b);

// Abstract mode on predicates; both must be exactly representable in the
// domain (throws std::invalid_argument otherwise).
bool check_hoare_abstract(domains::DomainKind kind, const domains::VarSetPtr& vars,
                          const Predicate& pre, const Statement& s, const Predicate& post);

// Linear automaton of the proof, states deduplicated by predicate, then
// generalized: every Hoare-valid (state, letter, state) edge is added while
// the budget lasts; the false state always carries a Σ self-loop.
automata::FloydHoareAutomaton automaton_from_sequence(const Word& trace,
                                                      const AssertionSequence& seq,
                                                      const std::vector<Statement>& alphabet,
                                                      const RefineOptions& opts = {});

// Data automaton from a safely-annotated path program: states are the
// unique location predicates, transitions inherited modulo the merge,
// initial state re-annotated true, error state false. With enhance, every
// abstractly Hoare-valid edge over the whole alphabet is added (all or
// nothing under the budget).
automata::FloydHoareAutomaton automaton_from_pathprogram(
    const pathprog::PathProgram& pp, const fixpoint::Annotation& ann, bool enhance,
    const fixpoint::AnalyzeOptions& fx_opts, const std::vector<Statement>& alphabet,
    const RefineOptions& opts = {});

struct HoareViolation {
    int src;
    int dst;
    std::string stmt;
    std::string detail;
};

// Checks every transition: abstract mode when fixpoint annotations are
// attached, exact mode otherwise. UNKNOWN counts as a violation.
std::vector<HoareViolation> audit_automaton(const automata::FloydHoareAutomaton& a,
                                            const RefineOptions& opts = {});

}  // namespace impcheck::refine
