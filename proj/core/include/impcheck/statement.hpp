#pragma once

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "impcheck/expr.hpp"

namespace impcheck {

// One letter of the program alphabet: assume, assignment, havoc, or a
// sequential composition of those. Values are immutable; identity is the
// canonical serialization (Seq re-associated to the right).
class Statement {
  public:
    enum class Kind { Assume, Assign, Havoc, Seq };

    static Statement assume(BoolExpr guard);
    static Statement assign(std::string var, LinExpr rhs);
    static Statement havoc(std::string var);
    static Statement seq(Statement first, Statement second);
    static Statement seq(const std::vector<Statement>& parts);

    Kind kind() const { return node_->kind; }
    const BoolExpr& guard() const { return *node_->guard; }
    const std::string& var() const { return node_->var; }
    const LinExpr& rhs() const { return node_->rhs; }
    const Statement& first() const { return *node_->first; }
    const Statement& second() const { return *node_->second; }

    // Leaf statements in execution order (a leaf returns itself).
    std::vector<Statement> leaves() const;
    bool contains_havoc() const;
    void collect_vars(std::set<std::string>& out) const;

    const std::string& text() const { return text_; }

    bool operator==(const Statement& o) const { return text_ == o.text_; }
    bool operator!=(const Statement& o) const { return text_ != o.text_; }
    bool operator<(const Statement& o) const { return text_ < o.text_; }

  private:
    struct Node {
        Kind kind;
        std::shared_ptr<const BoolExpr> guard;
        std::string var;
        LinExpr rhs;
        std::shared_ptr<const Statement> first, second;
    };
    Statement(std::shared_ptr<const Node> n, std::string text)
        : node_(std::move(n)), text_(std::move(text)) {}

    std::shared_ptr<const Node> node_;
    std::string text_;
};

using Word = std::vector<Statement>;

std::string word_text(const Word& w);

}  // namespace impcheck
