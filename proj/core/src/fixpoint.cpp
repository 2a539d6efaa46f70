#include "impcheck/fixpoint.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace impcheck::fixpoint {

using domains::AbstractState;
using domains::DomainKind;
using domains::VarSetPtr;

namespace {

struct Graph {
    std::vector<std::vector<const ProgramAutomaton::Edge*>> out;

    explicit Graph(const ProgramAutomaton& pa) : out(pa.num_locations()) {
        for (const auto& e : pa.edges) out[e.src].push_back(&e);
    }
};

// Depth-first pass: reverse post-order plus back-edge targets (which cover
// every cycle, reducible or not).
struct DfsInfo {
    std::vector<int> rpo_index;
    std::vector<int> order;  // locations in reverse post-order
    std::set<int> widen_points;
};

DfsInfo dfs_info(const ProgramAutomaton& pa, const Graph& g) {
    DfsInfo info;
    int n = pa.num_locations();
    info.rpo_index.assign(n, -1);
    std::vector<char> state(n, 0);  // 0 new, 1 on stack, 2 done
    std::vector<int> postorder;

    struct Frame {
        int loc;
        size_t next_edge;
    };
    std::vector<Frame> stack;
    stack.push_back({pa.initial, 0});
    state[pa.initial] = 1;
    while (!stack.empty()) {
        Frame& f = stack.back();
        if (f.next_edge < g.out[f.loc].size()) {
            int dst = g.out[f.loc][f.next_edge]->dst;
            ++f.next_edge;
            if (state[dst] == 0) {
                state[dst] = 1;
                stack.push_back({dst, 0});
            } else if (state[dst] == 1) {
                info.widen_points.insert(dst);
            }
        } else {
            state[f.loc] = 2;
            postorder.push_back(f.loc);
            stack.pop_back();
        }
    }
    for (auto it = postorder.rbegin(); it != postorder.rend(); ++it) {
        info.rpo_index[*it] = static_cast<int>(info.order.size());
        info.order.push_back(*it);
    }
    return info;
}

// Merge a new disjunct into a location's set under the cap policy: subsumed
// states vanish, overflow joins into the last disjunct.
bool merge_disjunct(std::vector<AbstractState>& set, AbstractState incoming, int cap) {
    if (incoming.is_bottom()) return false;
    for (const auto& d : set)
        if (domains::leq(incoming, d)) return false;
    std::vector<AbstractState> kept;
    for (auto& d : set)
        if (!domains::leq(d, incoming)) kept.push_back(std::move(d));
    kept.push_back(std::move(incoming));
    while (static_cast<int>(kept.size()) > cap) {
        AbstractState merged = domains::join(kept[kept.size() - 2], kept.back());
        kept.pop_back();
        kept.back() = std::move(merged);
    }
    set = std::move(kept);
    return true;
}

}  // namespace

AbstractState Annotation::joined(int loc, DomainKind kind, const VarSetPtr& vars) const {
    AbstractState acc = AbstractState::bottom(kind, vars);
    if (loc < static_cast<int>(disjuncts.size()))
        for (const auto& d : disjuncts[loc]) acc = domains::join(acc, d);
    return acc;
}

Predicate Annotation::predicate_at(int loc) const {
    Predicate p = Predicate::bottom();
    if (loc < static_cast<int>(disjuncts.size()))
        for (const auto& d : disjuncts[loc]) p = p.disj(domains::to_predicate(d));
    return p;
}

long chain_bound(DomainKind kind, size_t num_vars) {
    long v = static_cast<long>(num_vars);
    switch (kind) {
        case DomainKind::Interval: return 2 * v + 3;
        case DomainKind::Octagon: return 4 * v * v + 3;
        case DomainKind::Congruence: return 64 * v + 3;
        case DomainKind::Comp:
            return chain_bound(DomainKind::Octagon, num_vars) +
                   chain_bound(DomainKind::Congruence, num_vars);
    }
    throw std::logic_error("bad DomainKind");
}

Annotation analyze(const ProgramAutomaton& pa, const AnalyzeOptions& opts,
                   AnalyzeStats* stats) {
    Graph g(pa);
    DfsInfo info = dfs_info(pa, g);
    VarSetPtr vars = domains::make_varset(pa.vars);
    int n = pa.num_locations();

    Annotation ann;
    ann.disjuncts.resize(n);
    ann.disjuncts[pa.initial].push_back(AbstractState::top(opts.kind, vars));

    std::vector<int> updates(n, 0);
    AnalyzeStats local;
    AnalyzeStats& st = stats ? *stats : local;

    long visit_ceiling =
        10L * std::max<long>(1, static_cast<long>(pa.edges.size())) *
        chain_bound(opts.kind, vars->size()) *
        std::max(1, opts.disjunct_cap);

    auto rpo_less = [&](int a, int b) { return info.rpo_index[a] < info.rpo_index[b]; };
    std::set<int, decltype(rpo_less)> worklist(rpo_less);
    worklist.insert(pa.initial);

    while (!worklist.empty()) {
        int loc = *worklist.begin();
        worklist.erase(worklist.begin());
        if (++st.location_visits > visit_ceiling)
            throw std::logic_error("fixpoint iteration ceiling exceeded");
        for (const auto* e : g.out[loc]) {
            std::vector<AbstractState> incoming;
            for (const auto& d : ann.disjuncts[loc]) {
                AbstractState p = domains::post(d, e->stmt);
                if (!p.is_bottom()) incoming.push_back(std::move(p));
            }
            if (incoming.empty()) continue;
            bool widen_here = info.widen_points.count(e->dst) != 0;
            bool changed = false;
            if (widen_here && updates[e->dst] >= opts.widen_delay) {
                AbstractState old_joined = ann.joined(e->dst, opts.kind, vars);
                AbstractState grown = old_joined;
                for (auto& s : incoming) grown = domains::join(grown, s);
                if (!domains::leq(grown, old_joined) || ann.disjuncts[e->dst].empty()) {
                    AbstractState widened = domains::widen(old_joined, grown);
                    ann.disjuncts[e->dst] = {std::move(widened)};
                    changed = true;
                    ++st.widenings;
                }
            } else {
                for (auto& s : incoming)
                    changed |= merge_disjunct(ann.disjuncts[e->dst], std::move(s),
                                              opts.disjunct_cap);
            }
            if (changed) {
                ++updates[e->dst];
                worklist.insert(e->dst);
            }
        }
    }

    // Descending sweeps restore precision lost to widening. Each in-place
    // update keeps the annotation inductive, so stopping anywhere is sound.
    if (opts.disjunct_cap == 1) {
        for (int sweep = 0; sweep < opts.narrow_sweeps; ++sweep) {
            bool changed = false;
            for (int loc : info.order) {
                if (ann.disjuncts[loc].empty()) continue;
                AbstractState flowed = loc == pa.initial
                                           ? AbstractState::top(opts.kind, vars)
                                           : AbstractState::bottom(opts.kind, vars);
                for (const auto& e : pa.edges) {
                    if (e.dst != loc || ann.disjuncts[e.src].empty()) continue;
                    flowed = domains::join(flowed, domains::post(ann.disjuncts[e.src][0], e.stmt));
                }
                AbstractState narrowed = domains::meet(ann.disjuncts[loc][0], flowed);
                if (!(domains::leq(ann.disjuncts[loc][0], narrowed))) {
                    changed = true;
                }
                if (narrowed.is_bottom()) {
                    if (!ann.disjuncts[loc].empty()) changed = true;
                    ann.disjuncts[loc].clear();
                } else {
                    ann.disjuncts[loc] = {std::move(narrowed)};
                }
            }
            if (!changed) break;
        }
    }
    return ann;
}

bool is_safe(const Annotation& ann, const ProgramAutomaton& pa) {
    for (int err : pa.errors) {
        if (err >= static_cast<int>(ann.disjuncts.size())) continue;
        for (const auto& d : ann.disjuncts[err])
            if (!d.is_bottom()) return false;
    }
    return true;
}

bool audit_inductive(const Annotation& ann, const ProgramAutomaton& pa,
                     const AnalyzeOptions& opts) {
    VarSetPtr vars = domains::make_varset(pa.vars);
    for (const auto& e : pa.edges) {
        if (e.src >= static_cast<int>(ann.disjuncts.size())) continue;
        AbstractState target = ann.joined(e.dst, opts.kind, vars);
        for (const auto& d : ann.disjuncts[e.src]) {
            AbstractState p = domains::post(d, e.stmt);
            if (!domains::leq(p, target)) return false;
        }
    }
    // The entry assumption: the initial location covers top.
    AbstractState entry = AbstractState::top(opts.kind, vars);
    return domains::leq(entry, ann.joined(pa.initial, opts.kind, vars));
}

}  // namespace impcheck::fixpoint
