#include <algorithm>
#include <stdexcept>

#include "impcheck/domains.hpp"

namespace impcheck::domains {

OctagonState OctagonState::top(size_t n) {
    OctagonState s;
    s.n = static_cast<int>(n);
    s.d.assign(4 * n * n, OctBound::infinite());
    for (int a = 0; a < 2 * s.n; ++a) s.at(a, a) = OctBound::of(0);
    s.closed = true;
    return s;
}

OctagonState OctagonState::bot(size_t n) {
    OctagonState s = top(n);
    s.bottom = true;
    return s;
}

void OctagonState::set_upper(int a, int b, const Int& c) {
    if (!at(a, b).inf && at(a, b).v <= c) return;
    at(a, b) = OctBound::of(c);
    at(bar(b), bar(a)) = OctBound::of(c);
    closed = false;
}

// Tight closure for integer octagons: all-pairs shortest paths, emptiness
// check, unary tightening 2x <= c  =>  2x <= 2*floor(c/2), the parity
// emptiness check, then one strengthening pass. One round suffices.
void OctagonState::close() {
    if (bottom || closed) return;
    int size = 2 * n;
    for (int k = 0; k < size; ++k) {
        for (int a = 0; a < size; ++a) {
            if (at(a, k).inf) continue;
            for (int b = 0; b < size; ++b) {
                OctBound via = at(a, k).plus(at(k, b));
                if (via.inf) continue;
                if (at(a, b).inf || via.v < at(a, b).v) at(a, b) = via;
            }
        }
    }
    for (int a = 0; a < size; ++a) {
        if (!at(a, a).inf && at(a, a).v < 0) {
            bottom = true;
            closed = true;
            return;
        }
        at(a, a) = OctBound::of(0);
    }
    for (int a = 0; a < size; ++a) {
        OctBound& u = at(a, bar(a));
        if (!u.inf) u.v = 2 * floor_div(u.v, 2);
    }
    for (int a = 0; a < size; ++a) {
        if (at(a, bar(a)).inf || at(bar(a), a).inf) continue;
        if (at(a, bar(a)).v + at(bar(a), a).v < 0) {
            bottom = true;
            closed = true;
            return;
        }
    }
    for (int a = 0; a < size; ++a) {
        if (at(a, bar(a)).inf) continue;
        Int ha = floor_div(at(a, bar(a)).v, 2);
        for (int b = 0; b < size; ++b) {
            if (a == b || at(bar(b), b).inf) continue;
            Int half = ha + floor_div(at(bar(b), b).v, 2);
            if (at(a, b).inf || half < at(a, b).v) at(a, b) = OctBound::of(half);
        }
    }
    closed = true;
}

bool OctagonState::leq(const OctagonState& o) const {
    OctagonState a = *this;
    a.close();
    if (a.bottom) return true;
    if (o.bottom) return false;
    for (size_t i = 0; i < d.size(); ++i)
        if (!a.d[i].le(o.d[i])) return false;
    return true;
}

OctagonState OctagonState::join(const OctagonState& o) const {
    OctagonState a = *this, b = o;
    a.close();
    b.close();
    if (a.bottom) return b;
    if (b.bottom) return a;
    OctagonState r = top(n);
    for (size_t i = 0; i < d.size(); ++i)
        r.d[i] = a.d[i].le(b.d[i]) ? b.d[i] : a.d[i];
    r.closed = false;
    r.close();
    return r;
}

OctagonState OctagonState::meet(const OctagonState& o) const {
    if (bottom) return *this;
    if (o.bottom) return o;
    OctagonState r = top(n);
    for (size_t i = 0; i < d.size(); ++i)
        r.d[i] = d[i].le(o.d[i]) ? d[i] : o.d[i];
    r.closed = false;
    r.close();
    return r;
}

// Entries the new state does not respect go to +oo. The result is not
// closed, and must not be closed while it feeds further widening.
OctagonState OctagonState::widen(const OctagonState& newer) const {
    if (bottom) return newer;
    if (newer.bottom) return *this;
    OctagonState r = top(n);
    for (size_t i = 0; i < d.size(); ++i)
        r.d[i] = newer.d[i].le(d[i]) ? d[i] : OctBound::infinite();
    for (int a = 0; a < 2 * n; ++a) r.at(a, a) = OctBound::of(0);
    r.closed = false;
    return r;
}

void OctagonState::forget(int i) {
    close();
    if (bottom) return;
    for (int a = 0; a < 2 * n; ++a) {
        at(a, pos(i)) = OctBound::infinite();
        at(a, neg(i)) = OctBound::infinite();
        at(pos(i), a) = OctBound::infinite();
        at(neg(i), a) = OctBound::infinite();
    }
    at(pos(i), pos(i)) = OctBound::of(0);
    at(neg(i), neg(i)) = OctBound::of(0);
    // Forgetting in a closed matrix keeps it closed.
}

std::pair<std::optional<Int>, std::optional<Int>> OctagonState::var_bounds(int i) const {
    std::optional<Int> l, h;
    if (!at(neg(i), pos(i)).inf) h = floor_div(at(neg(i), pos(i)).v, 2);
    if (!at(pos(i), neg(i)).inf) l = -floor_div(at(pos(i), neg(i)).v, 2);
    return {l, h};
}

std::pair<std::optional<Int>, std::optional<Int>> OctagonState::bounds(
    const VarSet& vars, const LinExpr& e) const {
    std::optional<Int> l = e.constant_part(), h = e.constant_part();
    for (const auto& [v, c] : e.terms()) {
        auto [vl, vh] = var_bounds(var_index(vars, v));
        const auto& low = c > 0 ? vl : vh;
        const auto& high = c > 0 ? vh : vl;
        if (l) {
            if (low) *l += c * *low;
            else l.reset();
        }
        if (h) {
            if (high) *h += c * *high;
            else h.reset();
        }
    }
    return {l, h};
}

namespace {

// x_i := x_i + c rewrites every constraint touching x_i in place.
void shift_var(OctagonState& s, int i, const Int& c) {
    int p = OctagonState::pos(i), q = OctagonState::neg(i);
    for (int a = 0; a < 2 * s.n; ++a) {
        if (a == p || a == q) continue;
        if (!s.at(p, a).inf) s.at(p, a).v -= c;   // form(a) - x <= k
        if (!s.at(a, p).inf) s.at(a, p).v += c;   // x - form(a) <= k
        if (!s.at(q, a).inf) s.at(q, a).v += c;   // form(a) + x <= k
        if (!s.at(a, q).inf) s.at(a, q).v -= c;   // -x - form(a) <= k
    }
    if (!s.at(q, p).inf) s.at(q, p).v += 2 * c;   // 2x <= k
    if (!s.at(p, q).inf) s.at(p, q).v -= 2 * c;   // -2x <= k
}

// x_i := -x_i swaps the positive and negative forms of i.
void negate_var(OctagonState& s, int i) {
    int p = OctagonState::pos(i), q = OctagonState::neg(i);
    for (int a = 0; a < 2 * s.n; ++a) {
        std::swap(s.at(a, p), s.at(a, q));
    }
    for (int a = 0; a < 2 * s.n; ++a) {
        std::swap(s.at(p, a), s.at(q, a));
    }
}

}  // namespace

void OctagonState::assign(const VarSet& vars, int i, const LinExpr& e) {
    close();
    if (bottom) return;
    Int self = e.coeff(vars[i]);
    if (self == 1 && e.terms().size() == 1) {
        shift_var(*this, i, e.constant_part());
        return;
    }
    if (self == -1 && e.terms().size() == 1) {
        negate_var(*this, i);
        shift_var(*this, i, e.constant_part());
        return;
    }
    // General case: bounds and unit-coefficient relations evaluated against
    // the pre-state, then forget and constrain.
    auto [lo, hi] = bounds(vars, e);
    struct Rel {
        int j;
        bool plus;  // true: bound on x_i - x_j; false: on x_i + x_j
        std::optional<Int> lo, hi;
    };
    std::vector<Rel> rels;
    for (const auto& [v, c] : e.terms()) {
        if (v == vars[i]) continue;  // the old value is gone after the write
        if (c != 1 && c != -1) continue;
        Rel rel;
        rel.j = var_index(vars, v);
        rel.plus = c == 1;
        LinExpr rest = rel.plus ? e - LinExpr::variable(v) : e + LinExpr::variable(v);
        auto [rl, rh] = bounds(vars, rest);
        rel.lo = rl;
        rel.hi = rh;
        rels.push_back(std::move(rel));
    }
    forget(i);
    if (lo && hi && *lo == *hi) {
        set_upper(neg(i), pos(i), 2 * *hi);
        set_upper(pos(i), neg(i), -2 * *lo);
    } else {
        if (hi) set_upper(neg(i), pos(i), 2 * *hi);
        if (lo) set_upper(pos(i), neg(i), -2 * *lo);
    }
    for (const auto& rel : rels) {
        int pj = pos(rel.j), pi = pos(i), nj = neg(rel.j);
        if (rel.plus) {
            // x_i - x_j in [lo, hi]
            if (rel.hi) set_upper(pj, pi, *rel.hi);
            if (rel.lo) set_upper(pi, pj, -*rel.lo);
        } else {
            // x_i + x_j in [lo, hi]
            if (rel.hi) set_upper(nj, pi, *rel.hi);
            if (rel.lo) set_upper(pi, nj, -*rel.lo);
        }
    }
    close();
}

void OctagonState::assume_cube(const VarSet& vars, const Cube& c) {
    close();
    if (bottom) return;
    for (const auto& atom : c.atoms) {
        if (atom.kind == Atom::Kind::Cong) continue;
        for (int dir = 0; dir < (atom.kind == Atom::Kind::Eq ? 2 : 1); ++dir) {
            LinExpr e = dir == 0 ? atom.expr : -atom.expr;
            Int b = dir == 0 ? atom.bound : -atom.bound;
            const auto& terms = e.terms();
            if (terms.size() == 1) {
                const auto& [v, c1] = *terms.begin();
                int i = var_index(vars, v);
                if (c1 == 1) set_upper(neg(i), pos(i), 2 * b);
                else if (c1 == -1) set_upper(pos(i), neg(i), 2 * b);
                // Larger coefficients cannot appear in canonical atoms.
            } else if (terms.size() == 2) {
                auto it = terms.begin();
                const auto& [v1, c1] = *it;
                ++it;
                const auto& [v2, c2] = *it;
                if ((c1 != 1 && c1 != -1) || (c2 != 1 && c2 != -1)) continue;
                int i = var_index(vars, v1), j = var_index(vars, v2);
                if (c1 == 1 && c2 == 1) set_upper(neg(i), pos(j), b);        // x_i + x_j <= b
                else if (c1 == 1 && c2 == -1) set_upper(pos(j), pos(i), b);  // x_i - x_j <= b
                else if (c1 == -1 && c2 == 1) set_upper(pos(i), pos(j), b);  // x_j - x_i <= b
                else set_upper(pos(i), neg(j), b);                           // -x_i - x_j <= b
            }
        }
    }
    close();
}

bool OctagonState::absorb_exact(const VarSet& vars, const Atom& a) {
    if (a.kind == Atom::Kind::Cong) return false;
    const auto& terms = a.expr.terms();
    auto unit = [](const Int& c) { return c == 1 || c == -1; };
    if (terms.size() == 1) {
        if (!unit(terms.begin()->second)) return false;
    } else if (terms.size() == 2) {
        auto it = terms.begin();
        if (!unit(it->second)) return false;
        ++it;
        if (!unit(it->second)) return false;
    } else {
        return false;
    }
    Cube c;
    c.atoms.push_back(a);
    assume_cube(vars, c);
    return true;
}

void OctagonState::to_cube(const VarSet& vars, Cube& out) const {
    OctagonState s = *this;
    s.close();
    if (s.bottom) throw std::logic_error("to_cube on bottom octagon");
    auto add_pair = [&](const LinExpr& e, const OctBound& b) {
        if (!b.inf) out.add_le(e - LinExpr::constant(b.v));
    };
    for (int i = 0; i < s.n; ++i) {
        auto [l, h] = s.var_bounds(i);
        if (l && h && *l == *h) {
            out.add_eq(LinExpr::variable(vars[i]) - LinExpr::constant(*l));
            continue;
        }
        if (h) out.add_le(LinExpr::variable(vars[i]) - LinExpr::constant(*h));
        if (l) out.add_le(LinExpr::variable(vars[i], -1) + LinExpr::constant(*l));
    }
    for (int i = 0; i < s.n; ++i) {
        for (int j = i + 1; j < s.n; ++j) {
            auto [li, hi_] = s.var_bounds(i);
            auto [lj, hj] = s.var_bounds(j);
            LinExpr xi = LinExpr::variable(vars[i]);
            LinExpr xj = LinExpr::variable(vars[j]);
            // Skip entries already implied by the unary bounds.
            auto implied = [](const std::optional<Int>& ha, const std::optional<Int>& hb,
                              const OctBound& b) {
                return !b.inf && ha && hb && *ha + *hb <= b.v;
            };
            const OctBound& dij = s.at(pos(j), pos(i));  // x_i - x_j
            if (!implied(hi_, lj ? std::optional<Int>(-*lj) : std::nullopt, dij))
                add_pair(xi - xj, dij);
            const OctBound& dji = s.at(pos(i), pos(j));  // x_j - x_i
            if (!implied(hj, li ? std::optional<Int>(-*li) : std::nullopt, dji))
                add_pair(xj - xi, dji);
            const OctBound& dsum = s.at(neg(i), pos(j));  // x_i + x_j
            if (!implied(hi_, hj, dsum)) add_pair(xi + xj, dsum);
            const OctBound& dneg = s.at(pos(i), neg(j));  // -x_i - x_j
            if (!implied(li ? std::optional<Int>(-*li) : std::nullopt,
                         lj ? std::optional<Int>(-*lj) : std::nullopt, dneg))
                add_pair(-xi - xj, dneg);
        }
    }
}

}  // namespace impcheck::domains
