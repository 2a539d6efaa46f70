#include "impcheck/automata.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <stdexcept>

namespace impcheck::automata {

void FloydHoareAutomaton::sort_transitions() {
    std::sort(transitions.begin(), transitions.end(),
              [](const Transition& a, const Transition& b) {
                  if (a.src != b.src) return a.src < b.src;
                  if (a.stmt.text() != b.stmt.text()) return a.stmt.text() < b.stmt.text();
                  return a.dst < b.dst;
              });
    transitions.erase(std::unique(transitions.begin(), transitions.end(),
                                  [](const Transition& a, const Transition& b) {
                                      return a.src == b.src && a.dst == b.dst &&
                                             a.stmt == b.stmt;
                                  }),
                      transitions.end());
}

std::vector<int> FloydHoareAutomaton::successors(int q, const Statement& st) const {
    std::vector<int> out;
    for (const auto& t : transitions)
        if (t.src == q && t.stmt == st) out.push_back(t.dst);
    return out;
}

bool accepts(const FloydHoareAutomaton& a, const Word& w) {
    if (a.empty()) return false;
    std::vector<char> cur(a.num_states, 0);
    cur[a.initial] = 1;
    // Transition index per letter text, built once per call.
    std::map<std::string, std::vector<std::pair<int, int>>> index;
    for (const auto& t : a.transitions) index[t.stmt.text()].push_back({t.src, t.dst});
    for (const auto& st : w) {
        std::vector<char> next(a.num_states, 0);
        auto it = index.find(st.text());
        bool any = false;
        if (it != index.end()) {
            for (const auto& [src, dst] : it->second) {
                if (cur[src]) {
                    next[dst] = 1;
                    any = true;
                }
            }
        }
        if (!any) return false;
        cur = std::move(next);
    }
    for (int q = 0; q < a.num_states; ++q)
        if (cur[q] && a.accepting[q]) return true;
    return false;
}

FloydHoareAutomaton fh_union(const FloydHoareAutomaton& a, const FloydHoareAutomaton& b) {
    FloydHoareAutomaton u;
    u.num_states = a.num_states + b.num_states + 1;
    u.accepting.assign(u.num_states, 0);
    u.annotation.assign(u.num_states, Predicate::top());
    int fresh = 0;
    int offa = 1, offb = 1 + a.num_states;
    u.initial = fresh;

    // Either operand accepting the empty word would force the fresh initial
    // state to be both true- and false-annotated; the pipeline never builds
    // such automata.
    if ((!a.empty() && a.accepting[a.initial]) || (!b.empty() && b.accepting[b.initial]))
        throw std::logic_error("fh_union: operand accepts the empty word");

    for (int q = 0; q < a.num_states; ++q) {
        u.accepting[offa + q] = a.accepting[q];
        u.annotation[offa + q] = a.annotation[q];
    }
    for (int q = 0; q < b.num_states; ++q) {
        u.accepting[offb + q] = b.accepting[q];
        u.annotation[offb + q] = b.annotation[q];
    }
    for (const auto& t : a.transitions)
        u.transitions.push_back({offa + t.src, t.stmt, offa + t.dst});
    for (const auto& t : b.transitions)
        u.transitions.push_back({offb + t.src, t.stmt, offb + t.dst});
    if (!a.empty())
        for (const auto& t : a.transitions)
            if (t.src == a.initial) u.transitions.push_back({fresh, t.stmt, offa + t.dst});
    if (!b.empty())
        for (const auto& t : b.transitions)
            if (t.src == b.initial) u.transitions.push_back({fresh, t.stmt, offb + t.dst});
    u.sort_transitions();
    return u;
}

namespace {

using Subset = std::vector<int>;  // sorted state ids

}  // namespace

std::optional<Run> inclusion_counterexample(const ProgramAutomaton& ap,
                                            const FloydHoareAutomaton& ad) {
    // Product of A_P with the on-the-fly determinized A_D. A product node
    // is accepting for the difference language when the A_P location is an
    // error location and the subset holds no accepting A_D state.
    std::map<Subset, int> subset_ids;
    std::vector<Subset> subsets;
    auto subset_id = [&](Subset s) {
        auto it = subset_ids.find(s);
        if (it != subset_ids.end()) return it->second;
        int id = static_cast<int>(subsets.size());
        subset_ids.emplace(s, id);
        subsets.push_back(std::move(s));
        return id;
    };

    // Per-state, letter-indexed transitions of A_D.
    std::vector<std::map<std::string, std::vector<int>>> delta(ad.num_states);
    for (const auto& t : ad.transitions) delta[t.src][t.stmt.text()].push_back(t.dst);

    auto subset_step = [&](const Subset& s, const Statement& st) {
        Subset out;
        for (int q : s) {
            auto it = delta[q].find(st.text());
            if (it == delta[q].end()) continue;
            out.insert(out.end(), it->second.begin(), it->second.end());
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    };

    auto subset_accepting = [&](const Subset& s) {
        for (int q : s)
            if (ad.accepting[q]) return true;
        return false;
    };

    struct Node {
        int loc;
        int subset;
    };
    std::map<std::pair<int, int>, int> seen;  // (loc, subset) -> node index
    std::vector<Node> nodes;
    std::vector<int> parent;
    std::vector<int> via_edge;  // index into ap.edges
    std::deque<int> queue;

    std::vector<const ProgramAutomaton::Edge*> edges_sorted;
    for (const auto& e : ap.edges) edges_sorted.push_back(&e);
    std::sort(edges_sorted.begin(), edges_sorted.end(),
              [](const ProgramAutomaton::Edge* a, const ProgramAutomaton::Edge* b) {
                  if (a->src != b->src) return a->src < b->src;
                  if (a->stmt.text() != b->stmt.text()) return a->stmt.text() < b->stmt.text();
                  return a->dst < b->dst;
              });
    std::vector<std::vector<int>> out_edges(ap.num_locations());
    for (size_t i = 0; i < edges_sorted.size(); ++i)
        out_edges[edges_sorted[i]->src].push_back(static_cast<int>(i));

    Subset init;
    if (!ad.empty()) init.push_back(ad.initial);
    int init_subset = subset_id(std::move(init));

    auto make_run = [&](int node_idx) {
        Run run;
        std::vector<int> chain;
        for (int i = node_idx; i != -1; i = parent[i]) chain.push_back(i);
        std::reverse(chain.begin(), chain.end());
        for (int i : chain) run.locations.push_back(nodes[i].loc);
        for (int i : chain)
            if (via_edge[i] >= 0) run.word.push_back(edges_sorted[via_edge[i]]->stmt);
        return run;
    };

    nodes.push_back({ap.initial, init_subset});
    parent.push_back(-1);
    via_edge.push_back(-1);
    seen.emplace(std::make_pair(ap.initial, init_subset), 0);
    if (ap.is_error(ap.initial) && !subset_accepting(subsets[init_subset]))
        return make_run(0);
    queue.push_back(0);

    while (!queue.empty()) {
        int cur = queue.front();
        queue.pop_front();
        for (int ei : out_edges[nodes[cur].loc]) {
            const auto* e = edges_sorted[ei];
            Subset next_subset = subset_step(subsets[nodes[cur].subset], e->stmt);
            int sid = subset_id(std::move(next_subset));
            auto key = std::make_pair(e->dst, sid);
            if (seen.count(key)) continue;
            int idx = static_cast<int>(nodes.size());
            nodes.push_back({e->dst, sid});
            parent.push_back(cur);
            via_edge.push_back(ei);
            seen.emplace(key, idx);
            if (ap.is_error(e->dst) && !subset_accepting(subsets[sid])) return make_run(idx);
            queue.push_back(idx);
        }
    }
    return std::nullopt;
}

namespace {

std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    return out;
}

}  // namespace

std::string to_dot(const FloydHoareAutomaton& a) {
    std::ostringstream os;
    os << "digraph data_automaton {\n  rankdir=LR;\n";
    os << "  __start [shape=point];\n";
    for (int q = 0; q < a.num_states; ++q) {
        os << "  q" << q << " [shape=" << (a.accepting[q] ? "doublecircle" : "circle")
           << ",label=\"q" << q << "\\n" << dot_escape(a.annotation[q].text()) << "\"];\n";
    }
    if (!a.empty()) os << "  __start -> q" << a.initial << ";\n";
    // Transitions sharing endpoints collapse into one multi-line label.
    std::map<std::pair<int, int>, std::vector<std::string>> grouped;
    for (const auto& t : a.transitions)
        grouped[{t.src, t.dst}].push_back(
            t.stmt.kind() == Statement::Kind::Assume ? t.stmt.guard().text() : t.stmt.text());
    for (const auto& [key, labels] : grouped) {
        std::string joined;
        for (size_t i = 0; i < labels.size(); ++i) {
            if (i) joined += "\\n";
            joined += dot_escape(labels[i]);
        }
        os << "  q" << key.first << " -> q" << key.second << " [label=\"" << joined
           << "\"];\n";
    }
    os << "}\n";
    return os.str();
}

}  // namespace impcheck::automata
