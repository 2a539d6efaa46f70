#pragma once

// Shared test utilities: deterministic random generators for expressions,
// statements, predicates and automata, plus brute-force oracles the
// property suites compare against.

#include <algorithm>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "impcheck/automata.hpp"
#include "impcheck/parser.hpp"
#include "impcheck/predicate.hpp"
#include "impcheck/program_automaton.hpp"
#include "impcheck/semantics.hpp"

namespace testutil {

using namespace impcheck;

using Rng = std::mt19937;

inline int pick(Rng& rng, int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline std::vector<std::string> small_vars(int n) {
    std::vector<std::string> v = {"x", "y", "z", "w"};
    v.resize(n);
    return v;
}

// ------------------------------------------------------------ expressions

inline LinExpr random_linexpr(Rng& rng, const std::vector<std::string>& vars, int max_coeff = 5,
                              int max_const = 10) {
    LinExpr e = LinExpr::constant(pick(rng, -max_const, max_const));
    for (const auto& v : vars)
        if (pick(rng, 0, 2) != 0) e = e + LinExpr::variable(v, pick(rng, -max_coeff, max_coeff));
    return e;
}

inline BoolExpr random_cmp(Rng& rng, const std::vector<std::string>& vars) {
    RelOp ops[] = {RelOp::Lt, RelOp::Le, RelOp::Gt, RelOp::Ge, RelOp::Eq, RelOp::Ne};
    return BoolExpr::cmp(ops[pick(rng, 0, 5)], random_linexpr(rng, vars, 3, 8),
                         random_linexpr(rng, vars, 3, 8));
}

inline BoolExpr random_bexpr(Rng& rng, const std::vector<std::string>& vars, int depth = 2) {
    if (depth == 0 || pick(rng, 0, 2) == 0) return random_cmp(rng, vars);
    switch (pick(rng, 0, 2)) {
        case 0: return BoolExpr::conj(random_bexpr(rng, vars, depth - 1),
                                      random_bexpr(rng, vars, depth - 1));
        case 1: return BoolExpr::disj(random_bexpr(rng, vars, depth - 1),
                                      random_bexpr(rng, vars, depth - 1));
        default: return BoolExpr::negation(random_bexpr(rng, vars, depth - 1));
    }
}

inline Statement random_leaf_statement(Rng& rng, const std::vector<std::string>& vars,
                                       bool allow_havoc = true) {
    int k = pick(rng, 0, allow_havoc ? 3 : 2);
    switch (k) {
        case 0: return Statement::assume(random_cmp(rng, vars));
        case 3: return Statement::havoc(vars[pick(rng, 0, (int)vars.size() - 1)]);
        default:
            return Statement::assign(vars[pick(rng, 0, (int)vars.size() - 1)],
                                     random_linexpr(rng, vars, 2, 6));
    }
}

inline Statement random_statement(Rng& rng, const std::vector<std::string>& vars,
                                  bool allow_havoc = true) {
    int leaves = pick(rng, 1, 3);
    std::vector<Statement> parts;
    for (int i = 0; i < leaves; ++i)
        parts.push_back(random_leaf_statement(rng, vars, allow_havoc && leaves == 1));
    return leaves == 1 ? parts[0] : Statement::seq(parts);
}

// ------------------------------------------------------------- predicates

inline Predicate random_predicate(Rng& rng, const std::vector<std::string>& vars,
                                  int max_cubes = 2, int max_atoms = 3) {
    std::vector<Cube> cubes;
    int nc = pick(rng, 1, max_cubes);
    for (int c = 0; c < nc; ++c) {
        Cube cube;
        int na = pick(rng, 1, max_atoms);
        bool ok = true;
        for (int a = 0; a < na && ok; ++a) {
            LinExpr e = random_linexpr(rng, vars, 3, 10);
            switch (pick(rng, 0, 3)) {
                case 0: ok = cube.add_eq(e); break;
                case 3: ok = cube.add_cong(e, pick(rng, 2, 6)); break;
                default: ok = cube.add_le(e); break;
            }
        }
        if (ok) cubes.push_back(std::move(cube));
    }
    return Predicate::of_cubes(std::move(cubes));
}

// ------------------------------------------------- brute-force evaluation

// Flattened predicate over machine integers; safe for the small boxes and
// coefficients the generators produce.
struct CompiledPred {
    struct CAtom {
        int kind;  // 0 le, 1 eq, 2 cong
        std::vector<std::pair<int, long long>> terms;
        long long bound = 0, modulus = 0;
    };
    std::vector<std::vector<CAtom>> cubes;
    bool is_true = false, is_false = false;

    bool eval(const std::vector<long long>& vals) const {
        if (is_true) return true;
        if (is_false) return false;
        for (const auto& cube : cubes) {
            bool ok = true;
            for (const auto& a : cube) {
                long long s = 0;
                for (const auto& [i, c] : a.terms) s += c * vals[i];
                if (a.kind == 0) ok = s <= a.bound;
                else if (a.kind == 1) ok = s == a.bound;
                else ok = ((s % a.modulus) + a.modulus) % a.modulus == a.bound;
                if (!ok) break;
            }
            if (ok) return true;
        }
        return false;
    }
};

inline CompiledPred compile_pred(const Predicate& p, const std::vector<std::string>& vars) {
    CompiledPred cp;
    cp.is_true = p.is_true();
    cp.is_false = p.is_false();
    for (const auto& cube : p.cubes()) {
        std::vector<CompiledPred::CAtom> catoms;
        for (const auto& atom : cube.atoms) {
            CompiledPred::CAtom ca;
            ca.kind = atom.kind == Atom::Kind::Le ? 0 : atom.kind == Atom::Kind::Eq ? 1 : 2;
            for (const auto& [v, c] : atom.expr.terms()) {
                auto it = std::find(vars.begin(), vars.end(), v);
                if (it == vars.end()) throw std::logic_error("compile_pred: unknown var " + v);
                ca.terms.emplace_back(static_cast<int>(it - vars.begin()), c.get_si());
            }
            ca.bound = atom.bound.get_si();
            if (atom.kind == Atom::Kind::Cong) ca.modulus = atom.modulus.get_si();
            catoms.push_back(std::move(ca));
        }
        cp.cubes.push_back(std::move(catoms));
    }
    return cp;
}

// First model in the box, scanning in odometer order.
inline std::optional<std::vector<long long>> brute_model(const Predicate& p,
                                                         const std::vector<std::string>& vars,
                                                         long long lo, long long hi) {
    CompiledPred cp = compile_pred(p, vars);
    std::vector<long long> vals(vars.size(), lo);
    if (vars.empty()) return cp.eval(vals) ? std::optional(vals) : std::nullopt;
    for (;;) {
        if (cp.eval(vals)) return vals;
        size_t i = 0;
        while (i < vals.size()) {
            if (++vals[i] <= hi) break;
            vals[i] = lo;
            ++i;
        }
        if (i == vals.size()) return std::nullopt;
    }
}

// --------------------------------------------------------------- automata

// Random program automaton over distinct assume-labels; some locations are
// errors.
inline ProgramAutomaton random_program_automaton(Rng& rng, int states, int letters,
                                                 int edges) {
    ProgramAutomaton pa;
    for (int i = 0; i < states; ++i) pa.names.push_back("l" + std::to_string(i));
    pa.vars = {"x"};
    pa.initial = 0;
    std::vector<Statement> sigma;
    for (int i = 0; i < letters; ++i)
        sigma.push_back(Statement::assume(
            BoolExpr::cmp(RelOp::Lt, LinExpr::variable("x"), LinExpr::constant(i))));
    for (int i = 0; i < edges; ++i) {
        pa.edges.push_back({pick(rng, 0, states - 1), sigma[pick(rng, 0, letters - 1)],
                            pick(rng, 0, states - 1)});
    }
    int errors = pick(rng, 1, 2);
    for (int i = 0; i < errors; ++i) pa.errors.insert(pick(rng, 0, states - 1));
    // The lowering invariant: error locations have no outgoing edges.
    std::vector<ProgramAutomaton::Edge> kept;
    for (auto& e : pa.edges)
        if (!pa.errors.count(e.src)) kept.push_back(std::move(e));
    pa.edges = std::move(kept);
    pa.sort_edges();
    return pa;
}

inline automata::FloydHoareAutomaton random_fh_automaton(Rng& rng, int states,
                                                         const std::vector<Statement>& sigma,
                                                         int transitions) {
    automata::FloydHoareAutomaton a;
    a.num_states = states;
    a.initial = 0;
    a.accepting.assign(states, 0);
    a.annotation.assign(states, Predicate::top());
    for (int i = 0; i < transitions; ++i)
        a.transitions.push_back({pick(rng, 0, states - 1),
                                 sigma[pick(rng, 0, (int)sigma.size() - 1)],
                                 pick(rng, 0, states - 1)});
    int acc = pick(rng, 1, std::max(1, states / 2));
    for (int i = 0; i < acc; ++i) a.accepting[pick(rng, 0, states - 1)] = 1;
    // Keep the Floyd-Hoare shape: the initial state never accepts (no empty
    // word), which fh_union requires.
    a.accepting[a.initial] = 0;
    for (int q = 0; q < states; ++q)
        if (a.accepting[q]) a.annotation[q] = Predicate::bottom();
    a.sort_transitions();
    return a;
}

// All words of the program automaton reaching an error location, up to the
// length bound, duplicates removed.
inline std::vector<Word> unique_error_words(const ProgramAutomaton& pa, size_t max_len,
                                            size_t cap = 200000) {
    auto words = error_words_up_to(pa, max_len, cap);
    std::sort(words.begin(), words.end(), [](const Word& a, const Word& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return word_text(a) < word_text(b);
    });
    words.erase(std::unique(words.begin(), words.end(),
                            [](const Word& a, const Word& b) {
                                return word_text(a) == word_text(b);
                            }),
                words.end());
    return words;
}

inline Word parse_word(const std::vector<std::string>& texts) {
    Word w;
    for (const auto& t : texts) w.push_back(parse_statement(t));
    return w;
}

// The paper's running example, in the concrete input syntax.
inline const char* p1_source() {
    return R"(var x, y;
x := 0;
y := 42;
while (x < 100) {
  x := x + 1;
  while (y <= 0) {
    y := 42;
  }
}
assert(x == 100 && y == 42);
)";
}

inline Word tau1() {
    return parse_word({"x:=0;y:=42", "assume(x>=100)", "assume(x!=100||y!=42)"});
}

inline Word tau2() {
    return parse_word({"x:=0;y:=42", "assume(x<100)", "x:=x+1", "assume(y>0)",
                       "assume(x>=100)", "assume(x!=100||y!=42)"});
}

// The path program of τ2 (the Fig. 2 shape), built directly.
inline ProgramAutomaton tau2_path_program() {
    ProgramAutomaton pa;
    pa.names = {"l0", "l1", "l2", "l3", "l6", "l7"};
    pa.vars = {"x", "y"};
    pa.initial = 0;
    pa.errors = {5};
    pa.edges = {
        {0, parse_statement("x:=0;y:=42"), 1},
        {1, parse_statement("assume(x<100)"), 2},
        {2, parse_statement("x:=x+1"), 3},
        {3, parse_statement("assume(y>0)"), 1},
        {1, parse_statement("assume(x>=100)"), 4},
        {4, parse_statement("assume(x!=100||y!=42)"), 5},
    };
    pa.sort_edges();
    return pa;
}

}  // namespace testutil
