#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "impcheck/expr.hpp"
#include "impcheck/semantics.hpp"

namespace impcheck {

// One constraint over the program variables. The expression carries only
// variable terms (the constant lives in `bound`), gcd-normalized and, for
// Le, integer-tightened.
//   Le:   expr <= bound
//   Eq:   expr == bound
//   Cong: expr ≡ bound (mod modulus), modulus >= 2, 0 <= bound < modulus
struct Atom {
    enum class Kind { Le, Eq, Cong };

    Kind kind;
    LinExpr expr;
    Int bound;
    Int modulus = 0;

    bool mentions(const std::string& var) const { return expr.coeff(var) != 0; }
    bool holds(const ConcreteState& sigma) const;
    std::string text() const;

    bool operator==(const Atom& o) const;
    bool operator<(const Atom& o) const;
};

// Normalization produces either a canonical atom or a trivial truth value.
struct NormalizedAtom {
    std::optional<Atom> atom;  // nullopt: trivially true or false
    bool trivially_false = false;
};

NormalizedAtom normalize_le(const LinExpr& e);              // e <= 0
NormalizedAtom normalize_eq(const LinExpr& e);              // e == 0
NormalizedAtom normalize_cong(const LinExpr& e, Int mod);   // e ≡ 0 (mod)

// Conjunction of atoms, kept sorted and duplicate-free.
struct Cube {
    std::vector<Atom> atoms;

    // Returns false if the added constraint is trivially unsatisfiable.
    bool add(const NormalizedAtom& na);
    bool add_le(const LinExpr& e) { return add(normalize_le(e)); }
    bool add_eq(const LinExpr& e) { return add(normalize_eq(e)); }
    bool add_cong(const LinExpr& e, const Int& mod) { return add(normalize_cong(e, mod)); }

    bool holds(const ConcreteState& sigma) const;
    void canonicalize();
    std::string text() const;

    bool operator==(const Cube& o) const { return atoms == o.atoms; }
    bool operator<(const Cube& o) const { return atoms < o.atoms; }
};

// Quantifier-free predicate in disjunctive normal form. No cubes encodes
// false; a single empty cube encodes true.
class Predicate {
  public:
    static Predicate top();
    static Predicate bottom();
    static Predicate of_cube(Cube c);
    static Predicate of_cubes(std::vector<Cube> cs);

    // DNF of a boolean expression; != splits into < or >. The result may be
    // over-approximated if the cube limit is hit (see conj).
    static Predicate from_bool_expr(const BoolExpr& b, size_t cube_limit = 256);

    bool is_true() const;
    bool is_false() const { return cubes_.empty(); }

    const std::vector<Cube>& cubes() const { return cubes_; }

    // Lossy conjunction: if the cube product exceeds the limit, cubes are
    // merged by dropping uncommon atoms. Always an over-approximation.
    Predicate conj(const Predicate& o, size_t cube_limit = 256) const;
    // Strict conjunction: nullopt instead of approximation.
    std::optional<Predicate> conj_strict(const Predicate& o, size_t cube_limit = 4096) const;
    Predicate disj(const Predicate& o, size_t cube_limit = 1024) const;

    // Exact negation, or nullopt when the expansion would be too large
    // (large congruence moduli, too many cubes).
    std::optional<Predicate> negated(size_t cube_limit = 4096,
                                     const Int& cong_modulus_limit = 64) const;

    Predicate substituted(const std::string& var, const LinExpr& e) const;
    Predicate renamed(const std::string& from, const std::string& to) const;

    bool holds(const ConcreteState& sigma) const;
    void collect_vars(std::set<std::string>& out) const;
    std::string text() const;

    bool operator==(const Predicate& o) const { return cubes_ == o.cubes_; }

  private:
    void canonicalize();
    std::vector<Cube> cubes_;
};

}  // namespace impcheck
