#include "impcheck/pathprog.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace impcheck::pathprog {

namespace {

// Tarjan SCCs; an edge lies on a cycle iff both endpoints share a
// nontrivial SCC, or it is a self-loop.
std::vector<int> scc_ids(const ProgramAutomaton& pa) {
    int n = pa.num_locations();
    std::vector<std::vector<int>> out(n);
    for (const auto& e : pa.edges) out[e.src].push_back(e.dst);

    std::vector<int> ids(n, -1), low(n, 0), num(n, -1), stack;
    std::vector<char> on_stack(n, 0);
    int counter = 0, comp = 0;

    std::function<void(int)> strongconnect = [&](int v) {
        num[v] = low[v] = counter++;
        stack.push_back(v);
        on_stack[v] = 1;
        for (int w : out[v]) {
            if (num[w] == -1) {
                strongconnect(w);
                low[v] = std::min(low[v], low[w]);
            } else if (on_stack[w]) {
                low[v] = std::min(low[v], num[w]);
            }
        }
        if (low[v] == num[v]) {
            for (;;) {
                int w = stack.back();
                stack.pop_back();
                on_stack[w] = 0;
                ids[w] = comp;
                if (w == v) break;
            }
            ++comp;
        }
    };
    for (int v = 0; v < n; ++v)
        if (num[v] == -1) strongconnect(v);
    return ids;
}

}  // namespace

bool has_loop(const automata::Run& run, const ProgramAutomaton& pa) {
    std::set<int> visited;
    for (int loc : run.locations)
        if (!visited.insert(loc).second) return true;

    std::vector<int> ids = scc_ids(pa);
    int comps = ids.empty() ? 0 : *std::max_element(ids.begin(), ids.end()) + 1;
    std::vector<int> members(comps, 0);
    for (int id : ids) ++members[id];
    std::set<std::string> cycle_labels;
    for (const auto& e : pa.edges)
        if (e.src == e.dst || (ids[e.src] == ids[e.dst] && members[ids[e.src]] > 1))
            cycle_labels.insert(e.stmt.text());
    for (const auto& st : run.word)
        if (cycle_labels.count(st.text())) return true;
    return false;
}

PathProgram extract(const automata::Run& run, const ProgramAutomaton& pa,
                    const ExtractOptions& opts) {
    if (run.locations.empty() || !pa.is_error(run.locations.back()))
        throw std::logic_error("extract: run does not end in an error location");

    PathProgram pp;
    pp.error_location = run.locations.back();
    pp.automaton.names = pa.names;
    pp.automaton.vars = pa.vars;
    pp.automaton.initial = pa.initial;
    pp.automaton.errors = {pp.error_location};

    std::set<std::tuple<int, std::string, int>> kept;
    if (opts.by_label) {
        std::set<std::string> labels;
        for (const auto& st : run.word) labels.insert(st.text());
        for (const auto& e : pa.edges)
            if (labels.count(e.stmt.text()))
                kept.emplace(e.src, e.stmt.text(), e.dst);
    } else {
        for (size_t i = 0; i < run.word.size(); ++i)
            kept.emplace(run.locations[i], run.word[i].text(), run.locations[i + 1]);
    }
    for (const auto& e : pa.edges) {
        if (kept.count({e.src, e.stmt.text(), e.dst})) {
            pp.automaton.edges.push_back(e);
            pp.locations.insert(e.src);
            pp.locations.insert(e.dst);
        }
    }
    pp.locations.insert(pa.initial);
    pp.automaton.sort_edges();

    std::ostringstream key;
    for (const auto& e : pp.automaton.edges)
        key << e.src << "|" << e.stmt.text() << "|" << e.dst << ";";
    key << "err:" << pp.error_location;
    pp.canonical_key = key.str();
    return pp;
}

}  // namespace impcheck::pathprog
