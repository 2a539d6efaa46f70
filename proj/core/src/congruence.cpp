#include <stdexcept>

#include "impcheck/domains.hpp"

namespace impcheck::domains {

namespace {

using MR = std::pair<Int, Int>;  // (modulus, residue); m==0: constant, m==1: top

bool is_top(const MR& a) { return a.first == 1; }

MR top_mr() { return {1, 0}; }

MR canon(MR a) {
    if (a.first < 0) a.first = -a.first;
    if (a.first > 0) a.second = mod_norm(a.second, a.first);
    return a;
}

// Lattice order: does a describe a subset of b?
bool mr_leq(const MR& a, const MR& b) {
    if (is_top(b)) return true;
    if (b.first == 0) return a.first == 0 && a.second == b.second;
    if (a.first == 0) return mod_norm(a.second, b.first) == b.second;
    return mod_norm(a.first, b.first) == 0 && mod_norm(a.second, b.first) == b.second;
}

MR mr_join(const MR& a, const MR& b) {
    if (a.first == 0 && b.first == 0 && a.second == b.second) return a;
    Int diff = a.second - b.second;
    if (diff < 0) diff = -diff;
    Int g = gcd(gcd(a.first, b.first), diff);
    if (g == 0) return a;  // identical constants
    return canon({g, a.second});
}

std::optional<MR> mr_meet(const MR& a, const MR& b) {
    if (is_top(a)) return b;
    if (is_top(b)) return a;
    if (a.first == 0 && b.first == 0)
        return a.second == b.second ? std::optional<MR>(a) : std::nullopt;
    if (a.first == 0)
        return mod_norm(a.second, b.first) == b.second ? std::optional<MR>(a) : std::nullopt;
    if (b.first == 0)
        return mod_norm(b.second, a.first) == a.second ? std::optional<MR>(b) : std::nullopt;
    Int g = gcd(a.first, b.first);
    if (mod_norm(a.second - b.second, g) != 0) return std::nullopt;
    Int l = lcm(a.first, b.first);
    Int m1g = a.first / g, m2g = b.first / g;
    Int inv;
    if (mpz_invert(inv.get_mpz_t(), m1g.get_mpz_t(), m2g.get_mpz_t()) == 0)
        return canon({l, a.second});
    Int t = mod_norm((b.second - a.second) / g * inv, m2g);
    return canon({l, a.second + a.first * t});
}

MR mr_scale(const MR& a, const Int& k) {
    if (k == 0) return {0, 0};
    if (a.first == 0) return {0, a.second * k};
    Int ak = k < 0 ? -k : k;
    return canon({a.first * ak, a.second * k});
}

MR mr_add(const MR& a, const MR& b) {
    if (a.first == 0 && b.first == 0) return {0, a.second + b.second};
    Int m = a.first == 0 ? b.first : (b.first == 0 ? a.first : gcd(a.first, b.first));
    return canon({m, a.second + b.second});
}

}  // namespace

CongruenceState CongruenceState::top(size_t n) {
    CongruenceState s;
    s.vr.assign(n, top_mr());
    return s;
}

CongruenceState CongruenceState::bot(size_t n) {
    CongruenceState s = top(n);
    s.bottom = true;
    return s;
}

bool CongruenceState::leq(const CongruenceState& o) const {
    if (bottom) return true;
    if (o.bottom) return false;
    for (size_t i = 0; i < vr.size(); ++i)
        if (!mr_leq(vr[i], o.vr[i])) return false;
    return true;
}

CongruenceState CongruenceState::join(const CongruenceState& o) const {
    if (bottom) return o;
    if (o.bottom) return *this;
    CongruenceState r = top(vr.size());
    for (size_t i = 0; i < vr.size(); ++i) r.vr[i] = mr_join(vr[i], o.vr[i]);
    return r;
}

CongruenceState CongruenceState::meet(const CongruenceState& o) const {
    if (bottom) return *this;
    if (o.bottom) return o;
    CongruenceState r = top(vr.size());
    for (size_t i = 0; i < vr.size(); ++i) {
        auto m = mr_meet(vr[i], o.vr[i]);
        if (!m) return bot(vr.size());
        r.vr[i] = *m;
    }
    return r;
}

void CongruenceState::forget(int i) { vr[i] = top_mr(); }

void CongruenceState::assign(const VarSet& vars, int i, const LinExpr& e) {
    if (bottom) return;
    MR acc{0, e.constant_part()};
    for (const auto& [v, c] : e.terms())
        acc = mr_add(acc, mr_scale(vr[var_index(vars, v)], c));
    vr[i] = acc;
}

void CongruenceState::assume_cube(const VarSet& vars, const Cube& c) {
    if (bottom) return;
    for (const auto& atom : c.atoms) {
        if (atom.expr.terms().size() != 1) continue;
        const auto& [v, coeff] = *atom.expr.terms().begin();
        int i = var_index(vars, v);
        std::optional<MR> constraint;
        if (atom.kind == Atom::Kind::Eq) {
            // coeff is ±1 in canonical equalities over one variable.
            if (coeff == 1) constraint = MR{0, atom.bound};
            else if (coeff == -1) constraint = MR{0, -atom.bound};
        } else if (atom.kind == Atom::Kind::Cong) {
            Int inv;
            if (mpz_invert(inv.get_mpz_t(), coeff.get_mpz_t(), atom.modulus.get_mpz_t()))
                constraint = canon({atom.modulus, atom.bound * inv});
        }
        if (!constraint) continue;
        auto m = mr_meet(vr[i], *constraint);
        if (!m) {
            bottom = true;
            return;
        }
        vr[i] = *m;
    }
}

bool CongruenceState::absorb_exact(const VarSet& vars, const Atom& a) {
    if (a.expr.terms().size() != 1) return false;
    const auto& [v, coeff] = *a.expr.terms().begin();
    if (a.kind == Atom::Kind::Le) return false;
    if (a.kind == Atom::Kind::Eq && coeff != 1 && coeff != -1) return false;
    Cube c;
    c.atoms.push_back(a);
    assume_cube(vars, c);
    (void)v;
    return true;
}

void CongruenceState::to_cube(const VarSet& vars, Cube& out) const {
    for (size_t i = 0; i < vr.size(); ++i) {
        const auto& [m, r] = vr[i];
        if (m == 1) continue;
        if (m == 0) {
            out.add_eq(LinExpr::variable(vars[i]) - LinExpr::constant(r));
        } else {
            out.add_cong(LinExpr::variable(vars[i]) - LinExpr::constant(r), m);
        }
    }
}

}  // namespace impcheck::domains
