#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "impcheck/numeric.hpp"

namespace impcheck {

// Linear integer expression: sum of coefficient*variable terms plus a
// constant. The term map never holds zero coefficients.
class LinExpr {
  public:
    LinExpr() = default;
    explicit LinExpr(Int constant) : constant_(std::move(constant)) {}
    static LinExpr variable(const std::string& name, Int coeff = 1);
    static LinExpr constant(Int value) { return LinExpr(std::move(value)); }

    const std::map<std::string, Int>& terms() const { return terms_; }
    const Int& constant_part() const { return constant_; }
    Int coeff(const std::string& var) const;
    bool is_constant() const { return terms_.empty(); }

    LinExpr operator+(const LinExpr& o) const;
    LinExpr operator-(const LinExpr& o) const;
    LinExpr operator-() const { return scaled(-1); }
    LinExpr scaled(const Int& k) const;

    // Replaces var by e (used by substitution-based projection).
    LinExpr substituted(const std::string& var, const LinExpr& e) const;
    LinExpr renamed(const std::string& from, const std::string& to) const;

    void collect_vars(std::set<std::string>& out) const;

    bool operator==(const LinExpr& o) const {
        return terms_ == o.terms_ && constant_ == o.constant_;
    }
    bool operator<(const LinExpr& o) const;

    std::string text() const;

  private:
    void add_term(const std::string& var, const Int& coeff);

    std::map<std::string, Int> terms_;
    Int constant_ = 0;
};

enum class RelOp { Lt, Le, Gt, Ge, Eq, Ne };

const char* rel_op_text(RelOp op);
RelOp negated(RelOp op);

// Boolean expression tree over linear comparisons, closed under
// conjunction, disjunction and negation.
class BoolExpr {
  public:
    enum class Kind { True, False, Cmp, Not, And, Or };

    static BoolExpr literal(bool value);
    static BoolExpr cmp(RelOp op, LinExpr lhs, LinExpr rhs);
    static BoolExpr negation(BoolExpr e);
    static BoolExpr conj(BoolExpr a, BoolExpr b);
    static BoolExpr disj(BoolExpr a, BoolExpr b);

    Kind kind() const { return node_->kind; }
    RelOp op() const { return node_->op; }
    const LinExpr& lhs() const { return node_->lhs; }
    const LinExpr& rhs() const { return node_->rhs; }
    const BoolExpr& child(size_t i) const { return node_->children[i]; }
    size_t num_children() const { return node_->children.size(); }

    // Structural negation: comparisons flip their operator, de Morgan
    // pushes through conjunction/disjunction. No double negations survive.
    BoolExpr pushed_negation() const;

    void collect_vars(std::set<std::string>& out) const;
    std::string text() const;

    bool operator==(const BoolExpr& o) const { return text() == o.text(); }

  private:
    struct Node {
        Kind kind;
        RelOp op = RelOp::Eq;
        LinExpr lhs, rhs;
        std::vector<BoolExpr> children;
    };
    explicit BoolExpr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

}  // namespace impcheck
