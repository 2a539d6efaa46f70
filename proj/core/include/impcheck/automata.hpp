#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "impcheck/domains.hpp"
#include "impcheck/predicate.hpp"
#include "impcheck/program_automaton.hpp"
#include "impcheck/statement.hpp"

namespace impcheck::automata {

// Nondeterministic automaton over the statement alphabet whose states carry
// predicates: initial state true, accepting states false, every transition
// a valid Hoare triple. A zero-state automaton accepts nothing.
struct FloydHoareAutomaton {
    struct Transition {
        int src;
        Statement stmt;
        int dst;
    };

    int num_states = 0;
    int initial = -1;
    std::vector<char> accepting;        // size num_states
    std::vector<Predicate> annotation;  // size num_states
    std::vector<Transition> transitions;

    // Abstract-state annotations for automata built by the fixpoint engine;
    // used by the Hoare audit and the enhancement pass.
    std::optional<domains::DomainKind> abs_kind;
    domains::VarSetPtr abs_vars;
    std::vector<std::vector<domains::AbstractState>> abs_disjuncts;

    bool empty() const { return num_states == 0; }
    void sort_transitions();

    // Successors of state q under letter st.
    std::vector<int> successors(int q, const Statement& st) const;
};

bool accepts(const FloydHoareAutomaton& a, const Word& w);

// Language union: disjoint copies plus a fresh initial state (annotated
// true) that duplicates both initial states' out-transitions. State count
// is |a| + |b| + 1.
FloydHoareAutomaton fh_union(const FloydHoareAutomaton& a, const FloydHoareAutomaton& b);

// A run of the program automaton: locations.size() == word.size() + 1.
struct Run {
    std::vector<int> locations;
    Word word;
};

// Shortest word accepted by the program automaton but not by the data
// automaton (ties broken lexicographically by statement text); nullopt when
// L(A_P) ⊆ L(A_D). Breadth-first product with the determinized complement.
std::optional<Run> inclusion_counterexample(const ProgramAutomaton& ap,
                                            const FloydHoareAutomaton& ad);

std::string to_dot(const FloydHoareAutomaton& a);

}  // namespace impcheck::automata
