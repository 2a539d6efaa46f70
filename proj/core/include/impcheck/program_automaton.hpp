#pragma once

#include <set>
#include <string>
#include <vector>

#include "impcheck/ast.hpp"
#include "impcheck/statement.hpp"

namespace impcheck {

// Control flow graph of a program, doubling as a finite automaton whose
// accepting states are the error locations.
struct ProgramAutomaton {
    struct Edge {
        int src;
        Statement stmt;
        int dst;
    };

    std::vector<std::string> names;  // one per location
    std::vector<Edge> edges;         // sorted by (src, stmt text, dst)
    int initial = 0;
    std::set<int> errors;
    std::vector<std::string> vars;   // declared program variables, sorted

    int num_locations() const { return static_cast<int>(names.size()); }
    bool is_error(int loc) const { return errors.count(loc) != 0; }

    // Out-edges of loc, in the canonical (stmt text, dst) order.
    std::vector<const Edge*> out(int loc) const;

    // Sorted, duplicate-free edge labels.
    std::vector<Statement> alphabet() const;

    void sort_edges();
};

struct LowerOptions {
    bool fuse_assignments = true;   // merge maximal runs of := into one edge
    bool prune = true;              // drop locations not on an error path
};

ProgramAutomaton lower(const Program& program, const LowerOptions& opts = {});

std::string to_dot(const ProgramAutomaton& pa);

// All words labeling paths from the initial location to an error location,
// up to the given length. Brute-force; test support.
std::vector<Word> error_words_up_to(const ProgramAutomaton& pa, size_t max_len,
                                    size_t max_count = 1000000);

// True iff the word labels some path from `from` (default: initial) ending
// in an error location.
bool replays_to_error(const ProgramAutomaton& pa, const Word& word);

}  // namespace impcheck
