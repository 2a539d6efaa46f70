#include "impcheck/predicate.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace impcheck {

bool Atom::holds(const ConcreteState& sigma) const {
    Int v = eval(expr, sigma);
    switch (kind) {
        case Kind::Le: return v <= bound;
        case Kind::Eq: return v == bound;
        case Kind::Cong: return mod_norm(v, modulus) == bound;
    }
    throw std::logic_error("bad Atom kind");
}

std::string Atom::text() const {
    switch (kind) {
        case Kind::Le: return expr.text() + "<=" + to_string(bound);
        case Kind::Eq: return expr.text() + "==" + to_string(bound);
        case Kind::Cong:
            return expr.text() + " mod " + to_string(modulus) + "==" + to_string(bound);
    }
    throw std::logic_error("bad Atom kind");
}

bool Atom::operator==(const Atom& o) const {
    return kind == o.kind && expr == o.expr && bound == o.bound && modulus == o.modulus;
}

bool Atom::operator<(const Atom& o) const {
    if (kind != o.kind) return kind < o.kind;
    if (!(expr == o.expr)) return expr < o.expr;
    if (bound != o.bound) return bound < o.bound;
    return modulus < o.modulus;
}

namespace {

Int coeff_gcd(const LinExpr& e) {
    Int g = 0;
    for (const auto& [v, c] : e.terms()) g = gcd(g, c);
    return g;
}

LinExpr terms_only(const LinExpr& e) { return e - LinExpr::constant(e.constant_part()); }

LinExpr divided(const LinExpr& e, const Int& g) {
    LinExpr r;
    for (const auto& [v, c] : e.terms()) r = r + LinExpr::variable(v, c / g);
    return r;
}

}  // namespace

NormalizedAtom normalize_le(const LinExpr& e) {
    NormalizedAtom out;
    Int bound = -e.constant_part();
    if (e.terms().empty()) {
        out.trivially_false = bound < 0;
        return out;
    }
    Int g = coeff_gcd(e);
    Atom a;
    a.kind = Atom::Kind::Le;
    a.expr = divided(terms_only(e), g);
    a.bound = floor_div(bound, g);
    out.atom = std::move(a);
    return out;
}

NormalizedAtom normalize_eq(const LinExpr& e) {
    NormalizedAtom out;
    Int bound = -e.constant_part();
    if (e.terms().empty()) {
        out.trivially_false = bound != 0;
        return out;
    }
    Int g = coeff_gcd(e);
    if (mod_norm(bound, g) != 0) {
        out.trivially_false = true;
        return out;
    }
    Atom a;
    a.kind = Atom::Kind::Eq;
    a.expr = divided(terms_only(e), g);
    a.bound = bound / g;
    // Sign normalization: make the first coefficient positive.
    if (a.expr.terms().begin()->second < 0) {
        a.expr = -a.expr;
        a.bound = -a.bound;
    }
    out.atom = std::move(a);
    return out;
}

NormalizedAtom normalize_cong(const LinExpr& e, Int mod) {
    NormalizedAtom out;
    if (mod < 0) mod = -mod;
    if (mod == 0) return normalize_eq(e);
    Int residue = mod_norm(-e.constant_part(), mod);
    LinExpr reduced;
    for (const auto& [v, c] : e.terms()) {
        Int cr = mod_norm(c, mod);
        if (cr != 0) reduced = reduced + LinExpr::variable(v, cr);
    }
    if (reduced.terms().empty()) {
        out.trivially_false = residue != 0;
        return out;
    }
    Int g = mod;
    for (const auto& [v, c] : reduced.terms()) g = gcd(g, c);
    if (g > 1) {
        if (mod_norm(residue, g) != 0) {
            out.trivially_false = true;
            return out;
        }
        reduced = divided(reduced, g);
        mod /= g;
        residue /= g;
        if (mod == 1) return out;  // trivially true
    }
    Atom a;
    a.kind = Atom::Kind::Cong;
    a.expr = std::move(reduced);
    a.bound = residue;
    a.modulus = mod;
    out.atom = std::move(a);
    return out;
}

bool Cube::add(const NormalizedAtom& na) {
    if (na.trivially_false) return false;
    if (na.atom) atoms.push_back(*na.atom);
    return true;
}

bool Cube::holds(const ConcreteState& sigma) const {
    for (const auto& a : atoms)
        if (!a.holds(sigma)) return false;
    return true;
}

void Cube::canonicalize() {
    std::sort(atoms.begin(), atoms.end());
    atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
}

std::string Cube::text() const {
    if (atoms.empty()) return "true";
    std::ostringstream os;
    for (size_t i = 0; i < atoms.size(); ++i) {
        if (i) os << " && ";
        os << atoms[i].text();
    }
    return os.str();
}

Predicate Predicate::top() {
    Predicate p;
    p.cubes_.push_back(Cube{});
    return p;
}

Predicate Predicate::bottom() { return Predicate{}; }

Predicate Predicate::of_cube(Cube c) {
    Predicate p;
    c.canonicalize();
    p.cubes_.push_back(std::move(c));
    return p;
}

Predicate Predicate::of_cubes(std::vector<Cube> cs) {
    Predicate p;
    p.cubes_ = std::move(cs);
    p.canonicalize();
    return p;
}

bool Predicate::is_true() const { return cubes_.size() == 1 && cubes_[0].atoms.empty(); }

namespace {

// Hull of two cubes: keep the common atoms. Over-approximates both.
Cube cube_hull(const Cube& a, const Cube& b) {
    Cube out;
    std::set_intersection(a.atoms.begin(), a.atoms.end(), b.atoms.begin(), b.atoms.end(),
                          std::back_inserter(out.atoms));
    return out;
}

}  // namespace

void Predicate::canonicalize() {
    for (auto& c : cubes_) c.canonicalize();
    std::sort(cubes_.begin(), cubes_.end());
    cubes_.erase(std::unique(cubes_.begin(), cubes_.end()), cubes_.end());
    // A cube subsumed by a weaker cube (subset of atoms) is redundant.
    std::vector<Cube> kept;
    for (size_t i = 0; i < cubes_.size(); ++i) {
        bool subsumed = false;
        for (size_t j = 0; j < cubes_.size() && !subsumed; ++j) {
            if (i == j) continue;
            const Cube& weaker = cubes_[j];
            if (weaker.atoms.size() > cubes_[i].atoms.size()) continue;
            if (weaker.atoms.size() == cubes_[i].atoms.size() && j > i) continue;
            subsumed = std::includes(cubes_[i].atoms.begin(), cubes_[i].atoms.end(),
                                     weaker.atoms.begin(), weaker.atoms.end());
        }
        if (!subsumed) kept.push_back(cubes_[i]);
    }
    cubes_ = std::move(kept);
    if (std::any_of(cubes_.begin(), cubes_.end(), [](const Cube& c) { return c.atoms.empty(); }))
        cubes_ = {Cube{}};
}

Predicate Predicate::conj(const Predicate& o, size_t cube_limit) const {
    Predicate out;
    for (const auto& a : cubes_) {
        for (const auto& b : o.cubes_) {
            Cube c = a;
            c.atoms.insert(c.atoms.end(), b.atoms.begin(), b.atoms.end());
            out.cubes_.push_back(std::move(c));
        }
    }
    out.canonicalize();
    while (out.cubes_.size() > cube_limit) {
        Cube merged = cube_hull(out.cubes_[out.cubes_.size() - 2], out.cubes_.back());
        out.cubes_.pop_back();
        out.cubes_.back() = std::move(merged);
        out.canonicalize();
    }
    return out;
}

std::optional<Predicate> Predicate::conj_strict(const Predicate& o, size_t cube_limit) const {
    if (cubes_.size() * o.cubes_.size() > cube_limit) return std::nullopt;
    Predicate out;
    for (const auto& a : cubes_) {
        for (const auto& b : o.cubes_) {
            Cube c = a;
            c.atoms.insert(c.atoms.end(), b.atoms.begin(), b.atoms.end());
            out.cubes_.push_back(std::move(c));
        }
    }
    out.canonicalize();
    if (out.cubes_.size() > cube_limit) return std::nullopt;
    return out;
}

Predicate Predicate::disj(const Predicate& o, size_t cube_limit) const {
    Predicate out;
    out.cubes_ = cubes_;
    out.cubes_.insert(out.cubes_.end(), o.cubes_.begin(), o.cubes_.end());
    out.canonicalize();
    while (out.cubes_.size() > cube_limit) {
        Cube merged = cube_hull(out.cubes_[out.cubes_.size() - 2], out.cubes_.back());
        out.cubes_.pop_back();
        out.cubes_.back() = std::move(merged);
        out.canonicalize();
    }
    return out;
}

std::optional<Predicate> Predicate::negated(size_t cube_limit,
                                            const Int& cong_modulus_limit) const {
    // ¬(∨ cubes) = ∧_cubes (∨ negated atoms).
    Predicate acc = Predicate::top();
    for (const auto& cube : cubes_) {
        Predicate clause = Predicate::bottom();
        if (cube.atoms.empty()) return Predicate::bottom();  // ¬true
        for (const auto& atom : cube.atoms) {
            switch (atom.kind) {
                case Atom::Kind::Le: {
                    Cube c;
                    if (c.add_le(-atom.expr + LinExpr::constant(atom.bound + 1)))
                        clause = clause.disj(Predicate::of_cube(std::move(c)), cube_limit);
                    break;
                }
                case Atom::Kind::Eq: {
                    Cube lt, gt;
                    if (lt.add_le(atom.expr - LinExpr::constant(atom.bound - 1)))
                        clause = clause.disj(Predicate::of_cube(std::move(lt)), cube_limit);
                    if (gt.add_le(-atom.expr + LinExpr::constant(atom.bound + 1)))
                        clause = clause.disj(Predicate::of_cube(std::move(gt)), cube_limit);
                    break;
                }
                case Atom::Kind::Cong: {
                    if (atom.modulus > cong_modulus_limit) return std::nullopt;
                    for (Int r = 0; r < atom.modulus; ++r) {
                        if (r == atom.bound) continue;
                        Cube c;
                        if (c.add_cong(atom.expr - LinExpr::constant(r), atom.modulus))
                            clause = clause.disj(Predicate::of_cube(std::move(c)), cube_limit);
                    }
                    break;
                }
            }
        }
        auto next = acc.conj_strict(clause, cube_limit);
        if (!next) return std::nullopt;
        acc = std::move(*next);
    }
    return acc;
}

Predicate Predicate::substituted(const std::string& var, const LinExpr& e) const {
    Predicate out;
    for (const auto& cube : cubes_) {
        Cube c;
        bool feasible = true;
        for (const auto& atom : cube.atoms) {
            Int k = atom.expr.coeff(var);
            if (k == 0) {
                c.atoms.push_back(atom);
                continue;
            }
            LinExpr replaced = atom.expr.substituted(var, e);
            switch (atom.kind) {
                case Atom::Kind::Le:
                    feasible = c.add_le(replaced - LinExpr::constant(atom.bound));
                    break;
                case Atom::Kind::Eq:
                    feasible = c.add_eq(replaced - LinExpr::constant(atom.bound));
                    break;
                case Atom::Kind::Cong:
                    feasible =
                        c.add_cong(replaced - LinExpr::constant(atom.bound), atom.modulus);
                    break;
            }
            if (!feasible) break;
        }
        if (feasible) out.cubes_.push_back(std::move(c));
    }
    out.canonicalize();
    return out;
}

Predicate Predicate::renamed(const std::string& from, const std::string& to) const {
    return substituted(from, LinExpr::variable(to));
}

bool Predicate::holds(const ConcreteState& sigma) const {
    for (const auto& c : cubes_)
        if (c.holds(sigma)) return true;
    return false;
}

void Predicate::collect_vars(std::set<std::string>& out) const {
    for (const auto& c : cubes_)
        for (const auto& a : c.atoms) a.expr.collect_vars(out);
}

std::string Predicate::text() const {
    if (is_false()) return "false";
    if (is_true()) return "true";
    std::ostringstream os;
    for (size_t i = 0; i < cubes_.size(); ++i) {
        if (i) os << " || ";
        if (cubes_.size() > 1 && cubes_[i].atoms.size() > 1) os << "(";
        os << cubes_[i].text();
        if (cubes_.size() > 1 && cubes_[i].atoms.size() > 1) os << ")";
    }
    return os.str();
}

namespace {

Predicate cmp_to_predicate(RelOp op, const LinExpr& lhs, const LinExpr& rhs) {
    LinExpr d = lhs - rhs;
    Cube c;
    switch (op) {
        case RelOp::Lt:
            if (!c.add_le(d + LinExpr::constant(1))) return Predicate::bottom();
            return Predicate::of_cube(std::move(c));
        case RelOp::Le:
            if (!c.add_le(d)) return Predicate::bottom();
            return Predicate::of_cube(std::move(c));
        case RelOp::Gt:
            if (!c.add_le(-d + LinExpr::constant(1))) return Predicate::bottom();
            return Predicate::of_cube(std::move(c));
        case RelOp::Ge:
            if (!c.add_le(-d)) return Predicate::bottom();
            return Predicate::of_cube(std::move(c));
        case RelOp::Eq:
            if (!c.add_eq(d)) return Predicate::bottom();
            return Predicate::of_cube(std::move(c));
        case RelOp::Ne: {
            Cube lt, gt;
            Predicate p = Predicate::bottom();
            if (lt.add_le(d + LinExpr::constant(1))) p = p.disj(Predicate::of_cube(std::move(lt)));
            if (gt.add_le(-d + LinExpr::constant(1))) p = p.disj(Predicate::of_cube(std::move(gt)));
            return p;
        }
    }
    throw std::logic_error("bad RelOp");
}

}  // namespace

Predicate Predicate::from_bool_expr(const BoolExpr& b, size_t cube_limit) {
    switch (b.kind()) {
        case BoolExpr::Kind::True: return top();
        case BoolExpr::Kind::False: return bottom();
        case BoolExpr::Kind::Cmp: return cmp_to_predicate(b.op(), b.lhs(), b.rhs());
        case BoolExpr::Kind::Not: return from_bool_expr(b.child(0).pushed_negation(), cube_limit);
        case BoolExpr::Kind::And:
            return from_bool_expr(b.child(0), cube_limit)
                .conj(from_bool_expr(b.child(1), cube_limit), cube_limit);
        case BoolExpr::Kind::Or:
            return from_bool_expr(b.child(0), cube_limit)
                .disj(from_bool_expr(b.child(1), cube_limit), cube_limit);
    }
    throw std::logic_error("bad BoolExpr kind");
}

}  // namespace impcheck
