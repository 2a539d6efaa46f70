#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "impcheck/predicate.hpp"
#include "impcheck/statement.hpp"

namespace impcheck::domains {

enum class DomainKind { Interval, Octagon, Congruence, Comp };

std::optional<DomainKind> domain_from_string(const std::string& name);
const char* domain_name(DomainKind kind);

using VarSet = std::vector<std::string>;  // sorted, unique
using VarSetPtr = std::shared_ptr<const VarSet>;

VarSetPtr make_varset(std::vector<std::string> vars);
int var_index(const VarSet& vars, const std::string& name);

// ---------------------------------------------------------------- interval

struct IntervalState {
    bool bottom = false;
    std::vector<std::optional<Int>> lo, hi;  // nullopt = unbounded

    static IntervalState top(size_t n);
    static IntervalState bot(size_t n);

    bool leq(const IntervalState& o) const;
    IntervalState join(const IntervalState& o) const;
    IntervalState meet(const IntervalState& o) const;
    IntervalState widen(const IntervalState& newer) const;

    void forget(int i);
    void assign(const VarSet& vars, int i, const LinExpr& e);
    void assume_cube(const VarSet& vars, const Cube& c);
    bool absorb_exact(const VarSet& vars, const Atom& a);
    void to_cube(const VarSet& vars, Cube& out) const;

    // Bounds of a linear expression under this state.
    std::pair<std::optional<Int>, std::optional<Int>> bounds(const VarSet& vars,
                                                             const LinExpr& e) const;
    void normalize();  // empty interval -> bottom
};

// ----------------------------------------------------------------- octagon

struct OctBound {
    bool inf = true;
    Int v = 0;

    static OctBound infinite() { return OctBound{}; }
    static OctBound of(Int x) { return OctBound{false, std::move(x)}; }
    bool operator==(const OctBound& o) const {
        return inf == o.inf && (inf || v == o.v);
    }
    bool le(const OctBound& o) const { return o.inf || (!inf && v <= o.v); }
    OctBound plus(const OctBound& o) const {
        if (inf || o.inf) return infinite();
        return of(v + o.v);
    }
};

// Difference-bound matrix over the 2n signed forms +x_i (index 2i) and
// -x_i (index 2i+1). Entry (a,b) bounds form(b) - form(a).
struct OctagonState {
    bool bottom = false;
    bool closed = false;
    int n = 0;
    std::vector<OctBound> d;  // (2n)*(2n)

    static OctagonState top(size_t n);
    static OctagonState bot(size_t n);

    OctBound& at(int a, int b) { return d[a * 2 * n + b]; }
    const OctBound& at(int a, int b) const { return d[a * 2 * n + b]; }
    static int pos(int i) { return 2 * i; }
    static int neg(int i) { return 2 * i + 1; }
    static int bar(int a) { return a ^ 1; }

    // Tight integer closure; detects emptiness. Idempotent.
    void close();

    bool leq(const OctagonState& o) const;
    OctagonState join(const OctagonState& o) const;
    OctagonState meet(const OctagonState& o) const;
    OctagonState widen(const OctagonState& newer) const;  // result left unclosed

    void forget(int i);
    void assign(const VarSet& vars, int i, const LinExpr& e);
    void assume_cube(const VarSet& vars, const Cube& c);
    bool absorb_exact(const VarSet& vars, const Atom& a);
    void to_cube(const VarSet& vars, Cube& out) const;

    void set_upper(int a, int b, const Int& c);  // form(b)-form(a) <= c, with mirror
    std::pair<std::optional<Int>, std::optional<Int>> var_bounds(int i) const;
    std::pair<std::optional<Int>, std::optional<Int>> bounds(const VarSet& vars,
                                                             const LinExpr& e) const;
};

// -------------------------------------------------------------- congruence

// Per variable x: (m, r) meaning x ≡ r (mod m); m == 0 pins the constant r,
// m == 1 is top.
struct CongruenceState {
    bool bottom = false;
    std::vector<std::pair<Int, Int>> vr;

    static CongruenceState top(size_t n);
    static CongruenceState bot(size_t n);

    bool leq(const CongruenceState& o) const;
    CongruenceState join(const CongruenceState& o) const;
    CongruenceState meet(const CongruenceState& o) const;

    void forget(int i);
    void assign(const VarSet& vars, int i, const LinExpr& e);
    void assume_cube(const VarSet& vars, const Cube& c);
    bool absorb_exact(const VarSet& vars, const Atom& a);
    void to_cube(const VarSet& vars, Cube& out) const;
};

// ----------------------------------------------------------------- product

// Abstract value of the configured domain; Comp pairs congruence with
// octagon, mutually reduced.
class AbstractState {
  public:
    static AbstractState top(DomainKind kind, VarSetPtr vars);
    static AbstractState bottom(DomainKind kind, VarSetPtr vars);

    DomainKind kind() const { return kind_; }
    const VarSetPtr& vars() const { return vars_; }
    bool is_bottom() const;

    std::optional<IntervalState> itv;
    std::optional<OctagonState> oct;
    std::optional<CongruenceState> cong;

    void set_bottom();
    void reduce();

    bool operator==(const AbstractState& o) const;

  private:
    AbstractState(DomainKind kind, VarSetPtr vars) : kind_(kind), vars_(std::move(vars)) {}
    DomainKind kind_;
    VarSetPtr vars_;
};

bool leq(const AbstractState& a, const AbstractState& b);
AbstractState join(const AbstractState& a, const AbstractState& b);
AbstractState meet(const AbstractState& a, const AbstractState& b);
AbstractState widen(const AbstractState& older, const AbstractState& newer);
AbstractState post(const AbstractState& a, const Statement& s);
Predicate to_predicate(const AbstractState& a);

// Exact conversion: succeeds only when every atom of the (single-cube)
// predicate is representable in the domain.
std::optional<AbstractState> from_predicate(DomainKind kind, const VarSetPtr& vars,
                                            const Predicate& p);

}  // namespace impcheck::domains
