#include <algorithm>

#include "impcheck/domains.hpp"

namespace impcheck::domains {

IntervalState IntervalState::top(size_t n) {
    IntervalState s;
    s.lo.resize(n);
    s.hi.resize(n);
    return s;
}

IntervalState IntervalState::bot(size_t n) {
    IntervalState s = top(n);
    s.bottom = true;
    return s;
}

void IntervalState::normalize() {
    if (bottom) return;
    for (size_t i = 0; i < lo.size(); ++i) {
        if (lo[i] && hi[i] && *lo[i] > *hi[i]) {
            bottom = true;
            return;
        }
    }
}

bool IntervalState::leq(const IntervalState& o) const {
    if (bottom) return true;
    if (o.bottom) return false;
    for (size_t i = 0; i < lo.size(); ++i) {
        if (o.lo[i] && (!lo[i] || *lo[i] < *o.lo[i])) return false;
        if (o.hi[i] && (!hi[i] || *hi[i] > *o.hi[i])) return false;
    }
    return true;
}

IntervalState IntervalState::join(const IntervalState& o) const {
    if (bottom) return o;
    if (o.bottom) return *this;
    IntervalState r = top(lo.size());
    for (size_t i = 0; i < lo.size(); ++i) {
        if (lo[i] && o.lo[i]) r.lo[i] = std::min(*lo[i], *o.lo[i]);
        if (hi[i] && o.hi[i]) r.hi[i] = std::max(*hi[i], *o.hi[i]);
    }
    return r;
}

IntervalState IntervalState::meet(const IntervalState& o) const {
    if (bottom || o.bottom) return bot(lo.size());
    IntervalState r = top(lo.size());
    for (size_t i = 0; i < lo.size(); ++i) {
        r.lo[i] = lo[i];
        if (o.lo[i] && (!r.lo[i] || *o.lo[i] > *r.lo[i])) r.lo[i] = o.lo[i];
        r.hi[i] = hi[i];
        if (o.hi[i] && (!r.hi[i] || *o.hi[i] < *r.hi[i])) r.hi[i] = o.hi[i];
    }
    r.normalize();
    return r;
}

IntervalState IntervalState::widen(const IntervalState& newer) const {
    if (bottom) return newer;
    if (newer.bottom) return *this;
    IntervalState r = top(lo.size());
    for (size_t i = 0; i < lo.size(); ++i) {
        if (lo[i] && newer.lo[i] && *newer.lo[i] >= *lo[i]) r.lo[i] = lo[i];
        if (hi[i] && newer.hi[i] && *newer.hi[i] <= *hi[i]) r.hi[i] = hi[i];
    }
    return r;
}

void IntervalState::forget(int i) {
    lo[i].reset();
    hi[i].reset();
}

std::pair<std::optional<Int>, std::optional<Int>> IntervalState::bounds(
    const VarSet& vars, const LinExpr& e) const {
    std::optional<Int> l = e.constant_part(), h = e.constant_part();
    for (const auto& [v, c] : e.terms()) {
        int i = var_index(vars, v);
        const auto& vl = c > 0 ? lo[i] : hi[i];
        const auto& vh = c > 0 ? hi[i] : lo[i];
        if (l) {
            if (vl) *l += c * *vl;
            else l.reset();
        }
        if (h) {
            if (vh) *h += c * *vh;
            else h.reset();
        }
    }
    return {l, h};
}

void IntervalState::assign(const VarSet& vars, int i, const LinExpr& e) {
    if (bottom) return;
    auto [l, h] = bounds(vars, e);
    lo[i] = l;
    hi[i] = h;
}

void IntervalState::assume_cube(const VarSet& vars, const Cube& c) {
    if (bottom) return;
    // Two propagation rounds pick up most transitive bound information.
    for (int round = 0; round < 2 && !bottom; ++round) {
        for (const auto& atom : c.atoms) {
            if (atom.kind == Atom::Kind::Cong) continue;
            // expr <= bound and, for Eq, also expr >= bound.
            for (int dir = 0; dir < (atom.kind == Atom::Kind::Eq ? 2 : 1); ++dir) {
                LinExpr e = dir == 0 ? atom.expr : -atom.expr;
                Int b = dir == 0 ? atom.bound : -atom.bound;
                for (const auto& [v, coeff] : e.terms()) {
                    int i = var_index(vars, v);
                    LinExpr rest = e - LinExpr::variable(v, coeff);
                    auto [rl, rh] = bounds(vars, rest);
                    if (!rl) continue;  // coeff*v <= b - rest needs rest's lower bound
                    Int rhs = b - *rl;
                    if (coeff > 0) {
                        Int nb = floor_div(rhs, coeff);
                        if (!hi[i] || nb < *hi[i]) hi[i] = nb;
                    } else {
                        Int nb = ceil_div(rhs, coeff);
                        if (!lo[i] || nb > *lo[i]) lo[i] = nb;
                    }
                }
            }
            normalize();
            if (bottom) return;
        }
    }
}

bool IntervalState::absorb_exact(const VarSet& vars, const Atom& a) {
    if (a.kind == Atom::Kind::Cong) return false;
    if (a.expr.terms().size() != 1) return false;
    const auto& [v, c] = *a.expr.terms().begin();
    if (c != 1 && c != -1) return false;  // canonical atoms are gcd-reduced
    int i = var_index(vars, v);
    if (a.kind == Atom::Kind::Eq) {
        Int value = a.bound * c;  // c == ±1
        if (!lo[i] || *lo[i] < value) lo[i] = value;
        if (!hi[i] || *hi[i] > value) hi[i] = value;
    } else if (c == 1) {
        if (!hi[i] || a.bound < *hi[i]) hi[i] = a.bound;
    } else {
        Int value = -a.bound;
        if (!lo[i] || value > *lo[i]) lo[i] = value;
    }
    normalize();
    return true;
}

void IntervalState::to_cube(const VarSet& vars, Cube& out) const {
    for (size_t i = 0; i < lo.size(); ++i) {
        if (lo[i] && hi[i] && *lo[i] == *hi[i]) {
            out.add_eq(LinExpr::variable(vars[i]) - LinExpr::constant(*lo[i]));
            continue;
        }
        if (lo[i]) out.add_le(LinExpr::variable(vars[i], -1) + LinExpr::constant(*lo[i]));
        if (hi[i]) out.add_le(LinExpr::variable(vars[i]) - LinExpr::constant(*hi[i]));
    }
}

}  // namespace impcheck::domains
