#include "impcheck/linsolve.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace impcheck::linsolve {

namespace {

struct CubeOutcome {
    SatKind kind = SatKind::Unknown;
    ConcreteState model;
};

std::optional<Atom> renormalized(const Atom& a, const LinExpr& replaced_expr, bool& unsat) {
    NormalizedAtom na;
    switch (a.kind) {
        case Atom::Kind::Le:
            na = normalize_le(replaced_expr - LinExpr::constant(a.bound));
            break;
        case Atom::Kind::Eq:
            na = normalize_eq(replaced_expr - LinExpr::constant(a.bound));
            break;
        case Atom::Kind::Cong:
            na = normalize_cong(replaced_expr - LinExpr::constant(a.bound), a.modulus);
            break;
    }
    if (na.trivially_false) {
        unsat = true;
        return std::nullopt;
    }
    return na.atom;
}

// x ≡ r (mod m) merged with x ≡ r2 (mod m2); nullopt on contradiction.
std::optional<std::pair<Int, Int>> crt_merge(const std::pair<Int, Int>& a,
                                             const std::pair<Int, Int>& b) {
    const auto& [m1, r1] = a;
    const auto& [m2, r2] = b;
    Int g = gcd(m1, m2);
    if (mod_norm(r1 - r2, g) != 0) return std::nullopt;
    Int l = lcm(m1, m2);
    Int m1g = m1 / g, m2g = m2 / g;
    Int inv;
    if (mpz_invert(inv.get_mpz_t(), m1g.get_mpz_t(), m2g.get_mpz_t()) == 0) {
        // m2g == 1: the first congruence already decides everything.
        return std::make_pair(l, mod_norm(r1, l));
    }
    Int t = mod_norm((r2 - r1) / g * inv, m2g);
    return std::make_pair(l, mod_norm(r1 + m1 * t, l));
}

class CubeSolver {
  public:
    CubeSolver(const Cube& cube, const SolverOptions& opts, int64_t& budget)
        : opts_(opts), budget_(budget), original_(cube) {}

    CubeOutcome solve() {
        CubeOutcome out;
        work_ = original_.atoms;
        if (!substitute_equalities()) {
            out.kind = SatKind::Unsat;
            return out;
        }
        if (!split_atoms()) {
            out.kind = SatKind::Unsat;
            return out;
        }
        if (!fourier_motzkin()) {
            out.kind = fm_overflow_ ? SatKind::Unknown : SatKind::Unsat;
            return out;
        }
        exhaustive_ = true;
        ConcreteState assignment;
        if (search(0, assignment)) {
            out.kind = SatKind::Sat;
            out.model = finish_model(assignment);
            return out;
        }
        out.kind = exhaustive_ ? SatKind::Unsat : SatKind::Unknown;
        return out;
    }

  private:
    // Repeatedly removes an equality with a unit coefficient, substituting
    // its variable away. Exact for all atom kinds.
    bool substitute_equalities() {
        for (;;) {
            size_t idx = work_.size();
            std::string pivot;
            Int sign = 0;
            for (size_t i = 0; i < work_.size() && idx == work_.size(); ++i) {
                if (work_[i].kind != Atom::Kind::Eq) continue;
                for (const auto& [v, c] : work_[i].expr.terms()) {
                    if (c == 1 || c == -1) {
                        idx = i;
                        pivot = v;
                        sign = c;
                        break;
                    }
                }
            }
            if (idx == work_.size()) return true;
            Atom eq = work_[idx];
            work_.erase(work_.begin() + idx);
            // sign*x + rest = bound  =>  x = sign*(bound - rest)
            LinExpr rest = eq.expr - LinExpr::variable(pivot, sign);
            LinExpr value = (LinExpr::constant(eq.bound) - rest).scaled(sign);
            substitutions_.emplace_back(pivot, value);
            std::vector<Atom> next;
            for (const auto& a : work_) {
                if (!a.mentions(pivot)) {
                    next.push_back(a);
                    continue;
                }
                bool unsat = false;
                auto na = renormalized(a, a.expr.substituted(pivot, value), unsat);
                if (unsat) return false;
                if (na) next.push_back(std::move(*na));
            }
            work_ = std::move(next);
        }
    }

    // Separates inequalities and congruences; the remaining (non-unit)
    // equalities become inequality pairs. Per-variable congruences merge
    // through the CRT.
    bool split_atoms() {
        for (const auto& a : work_) {
            switch (a.kind) {
                case Atom::Kind::Le:
                    les_.push_back(a);
                    break;
                case Atom::Kind::Eq: {
                    Atom le{Atom::Kind::Le, a.expr, a.bound, 0};
                    Atom ge{Atom::Kind::Le, -a.expr, -a.bound, 0};
                    les_.push_back(std::move(le));
                    les_.push_back(std::move(ge));
                    break;
                }
                case Atom::Kind::Cong: {
                    if (a.expr.terms().size() == 1) {
                        const auto& [v, c] = *a.expr.terms().begin();
                        // gcd(c, m) == 1 after normalization, so c is
                        // invertible modulo m.
                        Int inv;
                        if (mpz_invert(inv.get_mpz_t(), c.get_mpz_t(), a.modulus.get_mpz_t()) == 0)
                            throw std::logic_error("non-invertible congruence coefficient");
                        std::pair<Int, Int> nc{a.modulus, mod_norm(a.bound * inv, a.modulus)};
                        auto it = var_cong_.find(v);
                        if (it == var_cong_.end()) {
                            var_cong_.emplace(v, nc);
                        } else {
                            auto merged = crt_merge(it->second, nc);
                            if (!merged) return false;
                            it->second = *merged;
                        }
                    } else {
                        hard_congs_.push_back(a);
                    }
                    break;
                }
            }
        }
        std::set<std::string> vars;
        for (const auto& a : les_) a.expr.collect_vars(vars);
        for (const auto& a : hard_congs_) a.expr.collect_vars(vars);
        for (const auto& [v, mr] : var_cong_) vars.insert(v);
        vars_.assign(vars.begin(), vars.end());
        return true;
    }

    bool fourier_motzkin() {
        systems_.resize(vars_.size() + 1);
        systems_[vars_.size()] = les_;
        size_t total = les_.size();
        for (size_t k = vars_.size(); k-- > 0;) {
            const std::string& x = vars_[k];
            std::vector<Atom> pos, neg, rest;
            for (const auto& a : systems_[k + 1]) {
                Int c = a.expr.coeff(x);
                if (c > 0) pos.push_back(a);
                else if (c < 0) neg.push_back(a);
                else rest.push_back(a);
            }
            for (const auto& p : pos) {
                Int a = p.expr.coeff(x);
                for (const auto& n : neg) {
                    Int b = -n.expr.coeff(x);
                    LinExpr combined = p.expr.scaled(b) + n.expr.scaled(a) -
                                       LinExpr::constant(b * p.bound + a * n.bound);
                    NormalizedAtom na = normalize_le(combined);
                    if (na.trivially_false) return false;
                    if (na.atom) rest.push_back(std::move(*na.atom));
                    if (++total > opts_.fm_atom_limit) {
                        fm_overflow_ = true;
                        return false;
                    }
                }
            }
            systems_[k] = std::move(rest);
        }
        return true;
    }

    // Depth-first integer model search along the variable order; bounds for
    // vars_[k] come from systems_[k+1] with earlier variables fixed.
    bool search(size_t k, ConcreteState& assignment) {
        if (k == vars_.size()) return leaf_ok(assignment);
        const std::string& x = vars_[k];
        std::optional<Int> lo, hi;
        for (const auto& a : systems_[k + 1]) {
            Int c = a.expr.coeff(x);
            if (c == 0) continue;
            Int rest = a.bound;
            bool ok = true;
            for (const auto& [v, cv] : a.expr.terms()) {
                if (v == x) continue;
                auto it = assignment.find(v);
                if (it == assignment.end()) {
                    ok = false;
                    break;
                }
                rest -= cv * it->second;
            }
            if (!ok) throw std::logic_error("search: unordered system");
            if (c > 0) {
                Int b = floor_div(rest, c);
                if (!hi || b < *hi) hi = b;
            } else {
                Int b = ceil_div(rest, c);
                if (!lo || b > *lo) lo = b;
            }
        }
        Int m = 1, r = 0;
        if (auto it = var_cong_.find(x); it != var_cong_.end()) {
            m = it->second.first;
            r = it->second.second;
        }

        auto try_value = [&](const Int& v) -> int {
            if (budget_ <= 0) {
                exhaustive_ = false;
                return -1;
            }
            --budget_;
            assignment[x] = v;
            if (search(k + 1, assignment)) return 1;
            assignment.erase(x);
            return 0;
        };

        if (lo && hi) {
            Int first = *lo + mod_norm(r - *lo, m);
            for (Int v = first; v <= *hi; v += m) {
                int res = try_value(v);
                if (res != 0) return res == 1;
            }
            return false;  // finite range fully enumerated
        }
        int cap = opts_.candidates_per_node;
        if (lo) {
            Int v = *lo + mod_norm(r - *lo, m);
            for (int i = 0; i < cap; ++i, v += m) {
                int res = try_value(v);
                if (res != 0) return res == 1;
            }
        } else if (hi) {
            Int v = *hi - mod_norm(*hi - r, m);
            for (int i = 0; i < cap; ++i, v -= m) {
                int res = try_value(v);
                if (res != 0) return res == 1;
            }
        } else {
            Int v = r;
            for (int i = 0; i < cap; ++i) {
                int res = try_value(v);
                if (res != 0) return res == 1;
                // r, r+m, r-m, r+2m, ...
                Int step = (i % 2 == 0) ? Int((i / 2 + 1) * 1) : Int(-(i / 2 + 1));
                v = r + step * m;
            }
        }
        exhaustive_ = false;  // half-open range only sampled
        return false;
    }

    bool leaf_ok(const ConcreteState& assignment) {
        for (const auto& a : hard_congs_)
            if (!a.holds(assignment)) return false;
        for (const auto& a : systems_[vars_.size()])
            if (!a.holds(assignment)) return false;
        return true;
    }

    ConcreteState finish_model(ConcreteState assignment) {
        for (auto it = substitutions_.rbegin(); it != substitutions_.rend(); ++it) {
            // Substitution expressions may mention variables that never
            // reached the solver; default them to zero first.
            std::set<std::string> needed;
            it->second.collect_vars(needed);
            for (const auto& v : needed) assignment.emplace(v, 0);
            assignment[it->first] = eval(it->second, assignment);
        }
        return assignment;
    }

    const SolverOptions& opts_;
    int64_t& budget_;
    const Cube& original_;
    std::vector<Atom> work_;
    std::vector<Atom> les_;
    std::vector<Atom> hard_congs_;
    std::map<std::string, std::pair<Int, Int>> var_cong_;
    std::vector<std::pair<std::string, LinExpr>> substitutions_;
    std::vector<std::string> vars_;
    std::vector<std::vector<Atom>> systems_;
    bool exhaustive_ = true;
    bool fm_overflow_ = false;
};

}  // namespace

SatResult check_sat(const Predicate& p, const SolverOptions& opts) {
    SatResult result;
    if (p.is_false()) {
        result.kind = SatKind::Unsat;
        return result;
    }
    int64_t budget = opts.node_budget;
    bool unknown_seen = false;
    for (const auto& cube : p.cubes()) {
        CubeSolver solver(cube, opts, budget);
        CubeOutcome out = solver.solve();
        if (out.kind == SatKind::Sat) {
            // The returned model must satisfy the queried predicate.
            std::set<std::string> vars;
            p.collect_vars(vars);
            for (const auto& v : vars) out.model.emplace(v, 0);
            if (!p.holds(out.model))
                throw std::logic_error("check_sat: model fails re-evaluation");
            result.kind = SatKind::Sat;
            result.model = std::move(out.model);
            return result;
        }
        if (out.kind == SatKind::Unknown) unknown_seen = true;
        if (budget <= 0 && &cube != &p.cubes().back()) {
            unknown_seen = true;
            break;
        }
    }
    if (unknown_seen) {
        result.kind = SatKind::Unknown;
        result.reason = "solver budget exhausted";
    } else {
        result.kind = SatKind::Unsat;
    }
    return result;
}

namespace {

bool entails_syntactically(const Predicate& p, const Predicate& q) {
    for (const auto& cp : p.cubes()) {
        bool hit = false;
        for (const auto& cq : q.cubes()) {
            if (std::includes(cp.atoms.begin(), cp.atoms.end(), cq.atoms.begin(),
                              cq.atoms.end())) {
                hit = true;
                break;
            }
        }
        if (!hit) return false;
    }
    return true;
}

Tri entails_via_negation(const Predicate& p, const Predicate& neg_q,
                         const SolverOptions& opts) {
    auto query = p.conj_strict(neg_q, opts.cube_limit);
    if (!query) return Tri::Unknown;
    switch (check_sat(*query, opts).kind) {
        case SatKind::Unsat: return Tri::True;
        case SatKind::Sat: return Tri::False;
        case SatKind::Unknown: return Tri::Unknown;
    }
    throw std::logic_error("bad SatKind");
}

}  // namespace

Tri entails(const Predicate& p, const Predicate& q, const SolverOptions& opts) {
    if (p.is_false()) return Tri::True;
    if (entails_syntactically(p, q)) return Tri::True;
    auto neg = q.negated(opts.cube_limit, opts.cong_modulus_limit);
    if (!neg) return Tri::Unknown;
    return entails_via_negation(p, *neg, opts);
}

Tri entails_with_negation(const Predicate& p, const Predicate& q,
                          const std::optional<Predicate>& neg_q, const SolverOptions& opts) {
    if (p.is_false()) return Tri::True;
    if (entails_syntactically(p, q)) return Tri::True;
    if (!neg_q) return Tri::Unknown;
    return entails_via_negation(p, *neg_q, opts);
}

namespace {

// Scales atom `t` so its x-term can be replaced exactly through the
// equality a*x == bound - rest (|a| > 1). Exact for every atom kind.
std::optional<Atom> combine_with_equality(const Atom& t, const std::string& x, const Int& a,
                                          const LinExpr& rest, const Int& eq_bound,
                                          bool& unsat) {
    Int c = t.expr.coeff(x);
    Int abs_a = a < 0 ? -a : a;
    Int sign = a < 0 ? -1 : 1;
    // |a| * t.expr has x-coefficient c*|a| = c*sign*a; a*x = eq_bound - rest.
    LinExpr scaled = t.expr.scaled(abs_a) - LinExpr::variable(x, c * abs_a) +
                     (LinExpr::constant(eq_bound) - rest).scaled(c * sign);
    switch (t.kind) {
        case Atom::Kind::Le: {
            auto na = normalize_le(scaled - LinExpr::constant(t.bound * abs_a));
            if (na.trivially_false) unsat = true;
            return na.atom;
        }
        case Atom::Kind::Eq: {
            auto na = normalize_eq(scaled - LinExpr::constant(t.bound * abs_a));
            if (na.trivially_false) unsat = true;
            return na.atom;
        }
        case Atom::Kind::Cong: {
            auto na = normalize_cong(scaled - LinExpr::constant(t.bound * abs_a),
                                     t.modulus * abs_a);
            if (na.trivially_false) unsat = true;
            return na.atom;
        }
    }
    throw std::logic_error("bad Atom kind");
}

}  // namespace

ElimResult eliminate(const Predicate& p, const std::string& var, const SolverOptions& opts) {
    ElimResult result;
    std::vector<Cube> cubes;
    for (const auto& cube : p.cubes()) {
        bool unsat = false;
        Cube out;

        // Prefer elimination through an equality on var.
        size_t eq_idx = cube.atoms.size();
        for (size_t i = 0; i < cube.atoms.size(); ++i) {
            const Atom& a = cube.atoms[i];
            if (a.kind != Atom::Kind::Eq || !a.mentions(var)) continue;
            if (eq_idx == cube.atoms.size()) {
                eq_idx = i;
                continue;
            }
            Int cur = cube.atoms[eq_idx].expr.coeff(var);
            Int cand = a.expr.coeff(var);
            if (abs(cand) < abs(cur)) eq_idx = i;
        }

        if (eq_idx != cube.atoms.size()) {
            const Atom& eq = cube.atoms[eq_idx];
            Int a = eq.expr.coeff(var);
            LinExpr rest = eq.expr - LinExpr::variable(var, a);
            if (a == 1 || a == -1) {
                LinExpr value = (LinExpr::constant(eq.bound) - rest).scaled(a);
                for (size_t i = 0; i < cube.atoms.size() && !unsat; ++i) {
                    if (i == eq_idx) continue;
                    const Atom& t = cube.atoms[i];
                    if (!t.mentions(var)) {
                        out.atoms.push_back(t);
                        continue;
                    }
                    auto na = renormalized(t, t.expr.substituted(var, value), unsat);
                    if (na) out.atoms.push_back(std::move(*na));
                }
            } else {
                // Divisibility survives the projection.
                Int abs_a = a < 0 ? -a : a;
                NormalizedAtom div = normalize_cong(rest - LinExpr::constant(eq.bound), abs_a);
                if (div.trivially_false) unsat = true;
                if (!unsat && div.atom) out.atoms.push_back(std::move(*div.atom));
                for (size_t i = 0; i < cube.atoms.size() && !unsat; ++i) {
                    if (i == eq_idx) continue;
                    const Atom& t = cube.atoms[i];
                    if (!t.mentions(var)) {
                        out.atoms.push_back(t);
                        continue;
                    }
                    auto na = combine_with_equality(t, var, a, rest, eq.bound, unsat);
                    if (na) out.atoms.push_back(std::move(*na));
                }
            }
        } else {
            // No equality mentions var: Fourier-Motzkin over the
            // inequalities, dropping congruences on var.
            std::vector<Atom> pos, neg;
            for (const auto& t : cube.atoms) {
                if (!t.mentions(var)) {
                    out.atoms.push_back(t);
                    continue;
                }
                if (t.kind == Atom::Kind::Cong) {
                    result.dropped_congruence = true;
                    continue;
                }
                (t.expr.coeff(var) > 0 ? pos : neg).push_back(t);
            }
            size_t produced = 0;
            for (const auto& pa : pos) {
                Int ca = pa.expr.coeff(var);
                for (const auto& nb : neg) {
                    Int cb = -nb.expr.coeff(var);
                    LinExpr combined = pa.expr.scaled(cb) + nb.expr.scaled(ca) -
                                       LinExpr::constant(cb * pa.bound + ca * nb.bound);
                    NormalizedAtom na = normalize_le(combined);
                    if (na.trivially_false) {
                        unsat = true;
                        break;
                    }
                    if (na.atom) out.atoms.push_back(std::move(*na.atom));
                    if (++produced > opts.fm_atom_limit) {
                        result.approximate = true;
                        break;
                    }
                }
                if (unsat || produced > opts.fm_atom_limit) break;
            }
        }
        if (!unsat) cubes.push_back(std::move(out));
    }
    result.pred = Predicate::of_cubes(std::move(cubes));
    return result;
}

}  // namespace impcheck::linsolve
