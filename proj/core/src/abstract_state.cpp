#include <algorithm>
#include <stdexcept>

#include "impcheck/domains.hpp"

namespace impcheck::domains {

std::optional<DomainKind> domain_from_string(const std::string& name) {
    if (name == "interval") return DomainKind::Interval;
    if (name == "octagon") return DomainKind::Octagon;
    if (name == "congruence") return DomainKind::Congruence;
    if (name == "comp") return DomainKind::Comp;
    return std::nullopt;
}

const char* domain_name(DomainKind kind) {
    switch (kind) {
        case DomainKind::Interval: return "interval";
        case DomainKind::Octagon: return "octagon";
        case DomainKind::Congruence: return "congruence";
        case DomainKind::Comp: return "comp";
    }
    throw std::logic_error("bad DomainKind");
}

VarSetPtr make_varset(std::vector<std::string> vars) {
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    return std::make_shared<const VarSet>(std::move(vars));
}

int var_index(const VarSet& vars, const std::string& name) {
    auto it = std::lower_bound(vars.begin(), vars.end(), name);
    if (it == vars.end() || *it != name)
        throw std::logic_error("unknown variable " + name);
    return static_cast<int>(it - vars.begin());
}

AbstractState AbstractState::top(DomainKind kind, VarSetPtr vars) {
    AbstractState s(kind, std::move(vars));
    size_t n = s.vars_->size();
    switch (kind) {
        case DomainKind::Interval: s.itv = IntervalState::top(n); break;
        case DomainKind::Octagon: s.oct = OctagonState::top(n); break;
        case DomainKind::Congruence: s.cong = CongruenceState::top(n); break;
        case DomainKind::Comp:
            s.cong = CongruenceState::top(n);
            s.oct = OctagonState::top(n);
            break;
    }
    return s;
}

AbstractState AbstractState::bottom(DomainKind kind, VarSetPtr vars) {
    AbstractState s = top(kind, std::move(vars));
    s.set_bottom();
    return s;
}

bool AbstractState::is_bottom() const {
    bool b = false;
    if (itv) b = b || itv->bottom;
    if (oct) {
        if (!oct->closed) {
            OctagonState copy = *oct;
            copy.close();
            b = b || copy.bottom;
        } else {
            b = b || oct->bottom;
        }
    }
    if (cong) b = b || cong->bottom;
    return b;
}

void AbstractState::set_bottom() {
    size_t n = vars_->size();
    if (itv) itv = IntervalState::bot(n);
    if (oct) oct = OctagonState::bot(n);
    if (cong) cong = CongruenceState::bot(n);
}

// One-directional reduction: bottom propagates, constants flow both ways,
// and congruences tighten the octagon's unary bounds.
void AbstractState::reduce() {
    if (is_bottom()) {
        set_bottom();
        return;
    }
    if (kind_ != DomainKind::Comp) return;
    const VarSet& vars = *vars_;
    for (int round = 0; round < 2; ++round) {
        oct->close();
        if (oct->bottom || cong->bottom) {
            set_bottom();
            return;
        }
        bool changed = false;
        for (size_t i = 0; i < vars.size(); ++i) {
            auto [lo, hi] = oct->var_bounds(static_cast<int>(i));
            auto& [m, r] = cong->vr[i];
            if (lo && hi && *lo == *hi && m != 0) {
                // The octagon pins a constant the congruence doesn't know.
                Atom a{Atom::Kind::Eq, LinExpr::variable(vars[i]), *lo, 0};
                if (!cong->absorb_exact(vars, a) || cong->bottom) {
                    set_bottom();
                    return;
                }
                changed = true;
            }
            if (m == 0) {
                Cube c;
                c.add_eq(LinExpr::variable(vars[i]) - LinExpr::constant(r));
                oct->assume_cube(vars, c);
                if (oct->bottom) {
                    set_bottom();
                    return;
                }
            } else if (m > 1) {
                // Snap finite unary bounds to the congruence class.
                if (lo) {
                    Int snapped = *lo + mod_norm(r - *lo, m);
                    if (snapped != *lo) {
                        oct->set_upper(OctagonState::pos(static_cast<int>(i)),
                                       OctagonState::neg(static_cast<int>(i)), -2 * snapped);
                        changed = true;
                    }
                }
                if (hi) {
                    Int snapped = *hi - mod_norm(*hi - r, m);
                    if (snapped != *hi) {
                        oct->set_upper(OctagonState::neg(static_cast<int>(i)),
                                       OctagonState::pos(static_cast<int>(i)), 2 * snapped);
                        changed = true;
                    }
                }
                if (lo && hi) {
                    Int snapped_lo = *lo + mod_norm(r - *lo, m);
                    Int snapped_hi = *hi - mod_norm(*hi - r, m);
                    if (snapped_lo > snapped_hi) {
                        set_bottom();
                        return;
                    }
                }
            }
        }
        oct->close();
        if (oct->bottom) {
            set_bottom();
            return;
        }
        if (!changed) break;
    }
}

bool AbstractState::operator==(const AbstractState& o) const {
    return leq(*this, o) && leq(o, *this);
}

bool leq(const AbstractState& a, const AbstractState& b) {
    if (a.is_bottom()) return true;
    if (b.is_bottom()) return false;
    if (a.itv && !a.itv->leq(*b.itv)) return false;
    if (a.oct && !a.oct->leq(*b.oct)) return false;
    if (a.cong && !a.cong->leq(*b.cong)) return false;
    return true;
}

AbstractState join(const AbstractState& a, const AbstractState& b) {
    if (a.is_bottom()) return b;
    if (b.is_bottom()) return a;
    AbstractState r = a;
    if (r.itv) r.itv = a.itv->join(*b.itv);
    if (r.oct) r.oct = a.oct->join(*b.oct);
    if (r.cong) r.cong = a.cong->join(*b.cong);
    return r;
}

AbstractState meet(const AbstractState& a, const AbstractState& b) {
    AbstractState r = a;
    if (a.is_bottom() || b.is_bottom()) {
        r.set_bottom();
        return r;
    }
    if (r.itv) r.itv = a.itv->meet(*b.itv);
    if (r.oct) r.oct = a.oct->meet(*b.oct);
    if (r.cong) r.cong = a.cong->meet(*b.cong);
    r.reduce();
    return r;
}

AbstractState widen(const AbstractState& older, const AbstractState& newer) {
    if (older.is_bottom()) return newer;
    if (newer.is_bottom()) return older;
    AbstractState r = older;
    if (r.itv) r.itv = older.itv->widen(*newer.itv);
    if (r.oct) r.oct = older.oct->widen(*newer.oct);
    if (r.cong) r.cong = older.cong->join(*newer.cong);  // finite ascending chains
    return r;
}

namespace {

AbstractState post_leaf(const AbstractState& a, const Statement& s) {
    const VarSet& vars = *a.vars();
    switch (s.kind()) {
        case Statement::Kind::Assume: {
            Predicate guard = Predicate::from_bool_expr(s.guard());
            AbstractState acc = AbstractState::bottom(a.kind(), a.vars());
            for (const auto& cube : guard.cubes()) {
                AbstractState branch = a;
                if (branch.itv) branch.itv->assume_cube(vars, cube);
                if (branch.oct) branch.oct->assume_cube(vars, cube);
                if (branch.cong) branch.cong->assume_cube(vars, cube);
                branch.reduce();
                if (!branch.is_bottom()) acc = join(acc, branch);
            }
            return acc;
        }
        case Statement::Kind::Assign: {
            AbstractState r = a;
            if (r.is_bottom()) return r;
            int i = var_index(vars, s.var());
            if (r.itv) r.itv->assign(vars, i, s.rhs());
            if (r.oct) r.oct->assign(vars, i, s.rhs());
            if (r.cong) r.cong->assign(vars, i, s.rhs());
            r.reduce();
            return r;
        }
        case Statement::Kind::Havoc: {
            AbstractState r = a;
            if (r.is_bottom()) return r;
            int i = var_index(vars, s.var());
            if (r.itv) r.itv->forget(i);
            if (r.oct) r.oct->forget(i);
            if (r.cong) r.cong->forget(i);
            return r;
        }
        default: throw std::logic_error("post_leaf: not a leaf");
    }
}

}  // namespace

AbstractState post(const AbstractState& a, const Statement& s) {
    AbstractState cur = a;
    for (const auto& leaf : s.leaves()) {
        if (cur.is_bottom()) {
            cur.set_bottom();
            return cur;
        }
        cur = post_leaf(cur, leaf);
    }
    return cur;
}

Predicate to_predicate(const AbstractState& a) {
    if (a.is_bottom()) return Predicate::bottom();
    Cube cube;
    const VarSet& vars = *a.vars();
    if (a.itv) a.itv->to_cube(vars, cube);
    if (a.oct) a.oct->to_cube(vars, cube);
    if (a.cong) a.cong->to_cube(vars, cube);
    return Predicate::of_cube(std::move(cube));
}

std::optional<AbstractState> from_predicate(DomainKind kind, const VarSetPtr& vars,
                                            const Predicate& p) {
    if (p.is_false()) return AbstractState::bottom(kind, vars);
    if (p.cubes().size() != 1) return std::nullopt;
    AbstractState s = AbstractState::top(kind, vars);
    for (const auto& atom : p.cubes()[0].atoms) {
        bool absorbed = false;
        switch (kind) {
            case DomainKind::Interval:
                absorbed = s.itv->absorb_exact(*vars, atom);
                break;
            case DomainKind::Octagon:
                absorbed = s.oct->absorb_exact(*vars, atom);
                break;
            case DomainKind::Congruence:
                absorbed = s.cong->absorb_exact(*vars, atom);
                break;
            case DomainKind::Comp:
                absorbed = s.oct->absorb_exact(*vars, atom) ||
                           s.cong->absorb_exact(*vars, atom);
                break;
        }
        if (!absorbed) return std::nullopt;
    }
    s.reduce();
    return s;
}

}  // namespace impcheck::domains
