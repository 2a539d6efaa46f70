#include "impcheck/refine.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace impcheck::refine {

using automata::FloydHoareAutomaton;
using domains::AbstractState;
using linsolve::SatKind;
using linsolve::Tri;

namespace {

// Drops cubes the solver can refute; unknowns stay (over-approximation).
Predicate prune_unsat_cubes(const Predicate& p, const linsolve::SolverOptions& solver) {
    if (p.is_false() || p.is_true()) return p;
    std::vector<Cube> kept;
    for (const auto& cube : p.cubes()) {
        if (linsolve::check_sat(Predicate::of_cube(cube), solver).kind != SatKind::Unsat)
            kept.push_back(cube);
    }
    return Predicate::of_cubes(std::move(kept));
}

std::string primed(const std::string& var) { return var + "@p"; }

Predicate sp_leaf(const Predicate& phi, const Statement& s, const RefineOptions& opts) {
    switch (s.kind()) {
        case Statement::Kind::Assume: {
            Predicate guard = Predicate::from_bool_expr(s.guard());
            return prune_unsat_cubes(phi.conj(guard), opts.solver);
        }
        case Statement::Kind::Assign: {
            const std::string& x = s.var();
            std::string xp = primed(x);
            Predicate shifted = phi.renamed(x, xp);
            Cube bind;
            if (!bind.add_eq(LinExpr::variable(x) - s.rhs().renamed(x, xp)))
                return Predicate::bottom();
            Predicate bound = shifted.conj(Predicate::of_cube(std::move(bind)));
            return linsolve::eliminate(bound, xp, opts.solver).pred;
        }
        case Statement::Kind::Havoc:
            return linsolve::eliminate(phi, s.var(), opts.solver).pred;
        default:
            throw std::logic_error("sp_leaf: not a leaf");
    }
}

// Removes atoms already implied by the rest of their cube; preserves
// equivalence, so Hoare validity of the sequence is unaffected.
Predicate simplified(const Predicate& p, const RefineOptions& opts) {
    if (p.is_false() || p.is_true()) return p;
    std::vector<Cube> out;
    for (const auto& cube : p.cubes()) {
        Cube cur = cube;
        if (cur.atoms.size() <= opts.simplify_atom_limit) {
            for (size_t i = 0; i < cur.atoms.size();) {
                Cube rest = cur;
                rest.atoms.erase(rest.atoms.begin() + i);
                Cube single;
                single.atoms.push_back(cur.atoms[i]);
                if (linsolve::entails(Predicate::of_cube(rest), Predicate::of_cube(single),
                                      opts.solver) == Tri::True) {
                    cur = std::move(rest);
                } else {
                    ++i;
                }
            }
        }
        out.push_back(std::move(cur));
    }
    return Predicate::of_cubes(std::move(out));
}

}  // namespace

Predicate sp(const Predicate& phi, const Statement& s, const RefineOptions& opts) {
    Predicate cur = phi;
    for (const auto& leaf : s.leaves()) {
        if (cur.is_false()) return cur;
        cur = sp_leaf(cur, leaf, opts);
    }
    return cur;
}

TraceResult analyze_trace(const Word& trace, const std::vector<std::string>& vars,
                          const RefineOptions& opts) {
    AssertionSequence seq;
    seq.preds.reserve(trace.size() + 1);
    seq.preds.push_back(Predicate::top());
    seq.first_false = trace.size() + 1;
    for (size_t i = 0; i < trace.size(); ++i) {
        Predicate next;
        std::pair<std::string, std::string> key;
        bool cached = false;
        if (opts.step_cache) {
            key = {seq.preds.back().text(), trace[i].text()};
            auto it = opts.step_cache->find(key);
            if (it != opts.step_cache->end()) {
                next = it->second;
                cached = true;
            }
        }
        if (!cached) {
            next = simplified(sp(seq.preds.back(), trace[i], opts), opts);
            if (opts.step_cache) opts.step_cache->emplace(std::move(key), next);
        }
        if (next.is_false()) {
            seq.first_false = i + 1;
            while (seq.preds.size() < trace.size() + 1)
                seq.preds.push_back(Predicate::bottom());
            return Infeasible{std::move(seq)};
        }
        seq.preds.push_back(std::move(next));
    }

    // The trace looks feasible; build an SSA path formula for a witness.
    std::map<std::string, int> version;
    auto name_of = [](const std::string& v, int k) {
        return k == 0 ? v : v + "@" + std::to_string(k);
    };
    auto versioned = [&](const LinExpr& e) {
        LinExpr out = LinExpr::constant(e.constant_part());
        for (const auto& [v, c] : e.terms()) {
            int k = version.count(v) ? version[v] : 0;
            out = out + LinExpr::variable(name_of(v, k), c);
        }
        return out;
    };

    Predicate path = Predicate::top();
    std::vector<std::string> havoc_names;
    for (const auto& st : trace) {
        for (const auto& leaf : st.leaves()) {
            switch (leaf.kind()) {
                case Statement::Kind::Assume: {
                    Predicate g = Predicate::from_bool_expr(leaf.guard());
                    std::set<std::string> gv;
                    g.collect_vars(gv);
                    for (const auto& v : gv) {
                        int k = version.count(v) ? version[v] : 0;
                        if (k != 0) g = g.renamed(v, name_of(v, k));
                    }
                    path = path.conj(g);
                    break;
                }
                case Statement::Kind::Assign: {
                    LinExpr rhs = versioned(leaf.rhs());
                    int k = ++version[leaf.var()];
                    Cube bind;
                    if (!bind.add_eq(LinExpr::variable(name_of(leaf.var(), k)) - rhs))
                        return TraceUnknown{"inconsistent path constraint"};
                    path = path.conj(Predicate::of_cube(std::move(bind)));
                    break;
                }
                case Statement::Kind::Havoc: {
                    int k = ++version[leaf.var()];
                    havoc_names.push_back(name_of(leaf.var(), k));
                    break;
                }
                default: throw std::logic_error("analyze_trace: nested Seq");
            }
        }
    }

    linsolve::SatResult sat = linsolve::check_sat(path, opts.solver);
    if (sat.kind == SatKind::Unknown) return TraceUnknown{sat.reason};
    if (sat.kind == SatKind::Unsat)
        return TraceUnknown{"postcondition satisfiable but path constraints refuted"};

    auto value_of = [&](const std::string& name) {
        auto it = sat.model.find(name);
        return it == sat.model.end() ? Int(0) : it->second;
    };
    ConcreteState initial;
    for (const auto& v : vars) initial[v] = value_of(v);
    std::vector<Int> schedule;
    for (const auto& h : havoc_names) schedule.push_back(value_of(h));

    auto replay = execute_trace(trace, initial, schedule);
    if (!std::holds_alternative<Execution>(replay))
        return TraceUnknown{"witness model failed to replay"};
    return Feasible{std::get<Execution>(std::move(replay)), std::move(schedule)};
}

Tri check_hoare(const Predicate& pre, const Statement& s, const Predicate& post,
                const RefineOptions& opts) {
    return linsolve::entails(sp(pre, s, opts), post, opts.solver);
}

bool check_hoare_abstract(const AbstractState& a, const Statement& s, const AbstractState& b) {
    return domains::leq(domains::post(a, s), b);
}

bool check_hoare_abstract(domains::DomainKind kind, const domains::VarSetPtr& vars,
                          const Predicate& pre, const Statement& s, const Predicate& post) {
    auto a = domains::from_predicate(kind, vars, pre);
    auto b = domains::from_predicate(kind, vars, post);
    if (!a || !b)
        throw std::invalid_argument("check_hoare: predicate not representable in the domain");
    return check_hoare_abstract(*a, s, *b);
}

FloydHoareAutomaton automaton_from_sequence(const Word& trace, const AssertionSequence& seq,
                                            const std::vector<Statement>& alphabet,
                                            const RefineOptions& opts) {
    if (seq.preds.size() != trace.size() + 1 || seq.first_false > trace.size())
        throw std::logic_error("automaton_from_sequence: sequence does not prove the trace");

    FloydHoareAutomaton a;
    std::map<std::string, int> state_of;
    std::vector<int> chain;
    for (const auto& p : seq.preds) {
        std::string key = p.text();
        auto it = state_of.find(key);
        if (it == state_of.end()) {
            it = state_of.emplace(key, a.num_states++).first;
            a.annotation.push_back(p);
            a.accepting.push_back(p.is_false());
        }
        chain.push_back(it->second);
    }
    a.initial = chain[0];
    int false_state = chain.back();
    if (!a.accepting[false_state])
        throw std::logic_error("automaton_from_sequence: proof does not end in false");

    std::vector<Statement> sigma = alphabet;
    sigma.insert(sigma.end(), trace.begin(), trace.end());
    std::sort(sigma.begin(), sigma.end());
    sigma.erase(std::unique(sigma.begin(), sigma.end()), sigma.end());

    std::set<std::tuple<int, std::string, int>> present;
    auto add = [&](int src, const Statement& st, int dst) {
        if (present.emplace(src, st.text(), dst).second)
            a.transitions.push_back({src, st, dst});
    };
    for (size_t i = 0; i < trace.size(); ++i) add(chain[i], trace[i], chain[i + 1]);
    for (const auto& st : sigma) add(false_state, st, false_state);

    size_t pair_count = static_cast<size_t>(a.num_states) * a.num_states * sigma.size();
    if (pair_count <= opts.closure_budget) {
        // One negation per target state, shared across all (q, st) queries.
        std::vector<std::optional<Predicate>> negations;
        negations.reserve(a.num_states);
        for (int q2 = 0; q2 < a.num_states; ++q2)
            negations.push_back(a.annotation[q2].negated(opts.solver.cube_limit,
                                                         opts.solver.cong_modulus_limit));
        for (int q = 0; q < a.num_states; ++q) {
            for (const auto& st : sigma) {
                Predicate image = sp(a.annotation[q], st, opts);
                for (int q2 = 0; q2 < a.num_states; ++q2) {
                    if (present.count({q, st.text(), q2})) continue;
                    if (linsolve::entails_with_negation(image, a.annotation[q2],
                                                        negations[q2],
                                                        opts.solver) == Tri::True)
                        add(q, st, q2);
                }
            }
        }
    }
    a.sort_transitions();
    return a;
}

FloydHoareAutomaton automaton_from_pathprogram(const pathprog::PathProgram& pp,
                                               const fixpoint::Annotation& ann, bool enhance,
                                               const fixpoint::AnalyzeOptions& fx_opts,
                                               const std::vector<Statement>& alphabet,
                                               const RefineOptions& opts) {
    if (!fixpoint::is_safe(ann, pp.automaton))
        throw std::logic_error("automaton_from_pathprogram: annotation does not prove safety");

    domains::VarSetPtr vars = domains::make_varset(pp.automaton.vars);
    FloydHoareAutomaton a;
    a.abs_kind = fx_opts.kind;
    a.abs_vars = vars;

    // Locations with equal predicates share a state; the initial location
    // is re-annotated true before merging.
    std::map<std::string, int> state_of;
    std::map<int, int> loc_state;
    for (int loc : pp.locations) {
        Predicate p = loc == pp.automaton.initial ? Predicate::top() : ann.predicate_at(loc);
        std::string key = p.text();
        auto it = state_of.find(key);
        if (it == state_of.end()) {
            it = state_of.emplace(key, a.num_states++).first;
            a.annotation.push_back(p);
            a.accepting.push_back(p.is_false());
            a.abs_disjuncts.emplace_back();
        }
        loc_state[loc] = it->second;
        if (loc == pp.automaton.initial) {
            a.abs_disjuncts[it->second] = {AbstractState::top(fx_opts.kind, vars)};
        } else if (loc < static_cast<int>(ann.disjuncts.size())) {
            auto& dst = a.abs_disjuncts[it->second];
            for (const auto& d : ann.disjuncts[loc])
                if (!d.is_bottom()) dst.push_back(d);
        }
    }
    a.initial = loc_state.at(pp.automaton.initial);
    int error_state = loc_state.at(pp.error_location);
    a.accepting[error_state] = 1;
    if (!a.annotation[error_state].is_false())
        throw std::logic_error("automaton_from_pathprogram: error state not annotated false");

    std::set<std::tuple<int, std::string, int>> present;
    for (const auto& e : pp.automaton.edges) {
        int s = loc_state.at(e.src), t = loc_state.at(e.dst);
        if (present.emplace(s, e.stmt.text(), t).second)
            a.transitions.push_back({s, e.stmt, t});
    }

    if (enhance) {
        // Joined abstract value per state drives the Hoare checks.
        std::vector<AbstractState> joined;
        joined.reserve(a.num_states);
        for (int q = 0; q < a.num_states; ++q) {
            AbstractState acc = AbstractState::bottom(fx_opts.kind, vars);
            for (const auto& d : a.abs_disjuncts[q]) acc = domains::join(acc, d);
            joined.push_back(std::move(acc));
        }
        std::vector<FloydHoareAutomaton::Transition> extra;
        size_t checks = 0;
        bool truncated = false;
        for (int q = 0; q < a.num_states && !truncated; ++q) {
            for (const auto& st : alphabet) {
                if (truncated) break;
                AbstractState image = domains::post(joined[q], st);
                for (int q2 = 0; q2 < a.num_states; ++q2) {
                    if (present.count({q, st.text(), q2})) continue;
                    if (++checks > opts.enhance_budget) {
                        truncated = true;
                        break;
                    }
                    if (domains::leq(image, joined[q2])) extra.push_back({q, st, q2});
                }
            }
        }
        // All or nothing: a half-enhanced automaton is still sound, but the
        // budget overflow falls back to the plain construction.
        if (!truncated)
            a.transitions.insert(a.transitions.end(), extra.begin(), extra.end());
    }
    a.sort_transitions();
    return a;
}

std::vector<HoareViolation> audit_automaton(const FloydHoareAutomaton& a,
                                            const RefineOptions& opts) {
    std::vector<HoareViolation> out;
    for (const auto& t : a.transitions) {
        if (a.abs_kind) {
            AbstractState target = AbstractState::bottom(*a.abs_kind, a.abs_vars);
            for (const auto& d : a.abs_disjuncts[t.dst]) target = domains::join(target, d);
            bool ok = true;
            if (a.abs_disjuncts[t.src].empty()) {
                // Bottom source: {false} st {anything} holds.
            } else {
                for (const auto& d : a.abs_disjuncts[t.src]) {
                    if (!domains::leq(domains::post(d, t.stmt), target)) {
                        ok = false;
                        break;
                    }
                }
            }
            if (!ok)
                out.push_back({t.src, t.dst, t.stmt.text(), "abstract post not below target"});
        } else {
            Tri r = check_hoare(a.annotation[t.src], t.stmt, a.annotation[t.dst], opts);
            if (r != Tri::True)
                out.push_back({t.src, t.dst, t.stmt.text(),
                               r == Tri::False ? "triple invalid" : "triple undecided"});
        }
    }
    return out;
}

}  // namespace impcheck::refine
