#pragma once

#include <set>
#include <string>

#include "impcheck/automata.hpp"
#include "impcheck/program_automaton.hpp"

namespace impcheck::pathprog {

// Sub-automaton of the parent program induced by a counterexample run.
// Locations keep the parent's numbering; exactly one error location.
struct PathProgram {
    ProgramAutomaton automaton;   // edges ⊆ parent edges, same location ids
    std::set<int> locations;      // endpoints of the kept edges
    int error_location = -1;
    std::string canonical_key;    // sorted edge serialization + error id
};

// Does the run revisit a location, or use a statement that labels an edge
// on some cycle of the program?
bool has_loop(const automata::Run& run, const ProgramAutomaton& pa);

struct ExtractOptions {
    // false: keep exactly the traversed edges. true: keep every edge whose
    // label occurs in the trace (the literal projection definition).
    bool by_label = false;
};

PathProgram extract(const automata::Run& run, const ProgramAutomaton& pa,
                    const ExtractOptions& opts = {});

class PathProgramCache {
  public:
    bool seen_before(const PathProgram& pp) const { return keys_.count(pp.canonical_key) != 0; }
    void remember(const PathProgram& pp) { keys_.insert(pp.canonical_key); }
    size_t size() const { return keys_.size(); }

  private:
    std::set<std::string> keys_;
};

}  // namespace impcheck::pathprog
