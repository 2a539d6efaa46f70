#include "impcheck/expr.hpp"

#include <sstream>
#include <stdexcept>

namespace impcheck {

LinExpr LinExpr::variable(const std::string& name, Int coeff) {
    LinExpr e;
    e.add_term(name, coeff);
    return e;
}

Int LinExpr::coeff(const std::string& var) const {
    auto it = terms_.find(var);
    return it == terms_.end() ? Int(0) : it->second;
}

void LinExpr::add_term(const std::string& var, const Int& coeff) {
    if (coeff == 0) return;
    auto [it, inserted] = terms_.emplace(var, coeff);
    if (!inserted) {
        it->second += coeff;
        if (it->second == 0) terms_.erase(it);
    }
}

LinExpr LinExpr::operator+(const LinExpr& o) const {
    LinExpr r = *this;
    r.constant_ += o.constant_;
    for (const auto& [v, c] : o.terms_) r.add_term(v, c);
    return r;
}

LinExpr LinExpr::operator-(const LinExpr& o) const { return *this + o.scaled(-1); }

LinExpr LinExpr::scaled(const Int& k) const {
    LinExpr r;
    if (k == 0) return r;
    r.constant_ = constant_ * k;
    for (const auto& [v, c] : terms_) r.terms_.emplace(v, c * k);
    return r;
}

LinExpr LinExpr::substituted(const std::string& var, const LinExpr& e) const {
    auto it = terms_.find(var);
    if (it == terms_.end()) return *this;
    Int c = it->second;
    LinExpr r = *this;
    r.terms_.erase(var);
    return r + e.scaled(c);
}

LinExpr LinExpr::renamed(const std::string& from, const std::string& to) const {
    return substituted(from, LinExpr::variable(to));
}

void LinExpr::collect_vars(std::set<std::string>& out) const {
    for (const auto& [v, c] : terms_) out.insert(v);
}

bool LinExpr::operator<(const LinExpr& o) const {
    if (terms_ != o.terms_) return terms_ < o.terms_;
    return constant_ < o.constant_;
}

std::string LinExpr::text() const {
    std::ostringstream os;
    bool first = true;
    for (const auto& [v, c] : terms_) {
        if (first) {
            if (c == 1) {
                os << v;
            } else if (c == -1) {
                os << "-" << v;
            } else {
                os << to_string(c) << "*" << v;
            }
            first = false;
        } else {
            Int a = c;
            os << (a < 0 ? "-" : "+");
            if (a < 0) a = -a;
            if (a == 1) {
                os << v;
            } else {
                os << to_string(a) << "*" << v;
            }
        }
    }
    if (first) {
        os << to_string(constant_);
    } else if (constant_ != 0) {
        Int a = constant_;
        os << (a < 0 ? "-" : "+");
        if (a < 0) a = -a;
        os << to_string(a);
    }
    return os.str();
}

const char* rel_op_text(RelOp op) {
    switch (op) {
        case RelOp::Lt: return "<";
        case RelOp::Le: return "<=";
        case RelOp::Gt: return ">";
        case RelOp::Ge: return ">=";
        case RelOp::Eq: return "==";
        case RelOp::Ne: return "!=";
    }
    throw std::logic_error("bad RelOp");
}

RelOp negated(RelOp op) {
    switch (op) {
        case RelOp::Lt: return RelOp::Ge;
        case RelOp::Le: return RelOp::Gt;
        case RelOp::Gt: return RelOp::Le;
        case RelOp::Ge: return RelOp::Lt;
        case RelOp::Eq: return RelOp::Ne;
        case RelOp::Ne: return RelOp::Eq;
    }
    throw std::logic_error("bad RelOp");
}

BoolExpr BoolExpr::literal(bool value) {
    auto n = std::make_shared<Node>();
    n->kind = value ? Kind::True : Kind::False;
    return BoolExpr(std::move(n));
}

BoolExpr BoolExpr::cmp(RelOp op, LinExpr lhs, LinExpr rhs) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Cmp;
    n->op = op;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return BoolExpr(std::move(n));
}

BoolExpr BoolExpr::negation(BoolExpr e) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Not;
    n->children.push_back(std::move(e));
    return BoolExpr(std::move(n));
}

BoolExpr BoolExpr::conj(BoolExpr a, BoolExpr b) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::And;
    n->children.push_back(std::move(a));
    n->children.push_back(std::move(b));
    return BoolExpr(std::move(n));
}

BoolExpr BoolExpr::disj(BoolExpr a, BoolExpr b) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Or;
    n->children.push_back(std::move(a));
    n->children.push_back(std::move(b));
    return BoolExpr(std::move(n));
}

BoolExpr BoolExpr::pushed_negation() const {
    switch (kind()) {
        case Kind::True: return literal(false);
        case Kind::False: return literal(true);
        case Kind::Cmp: return cmp(negated(op()), lhs(), rhs());
        case Kind::Not: return child(0);
        case Kind::And:
            return disj(child(0).pushed_negation(), child(1).pushed_negation());
        case Kind::Or:
            return conj(child(0).pushed_negation(), child(1).pushed_negation());
    }
    throw std::logic_error("bad BoolExpr kind");
}

void BoolExpr::collect_vars(std::set<std::string>& out) const {
    switch (kind()) {
        case Kind::True:
        case Kind::False: return;
        case Kind::Cmp:
            lhs().collect_vars(out);
            rhs().collect_vars(out);
            return;
        case Kind::Not:
        case Kind::And:
        case Kind::Or:
            for (size_t i = 0; i < num_children(); ++i) child(i).collect_vars(out);
            return;
    }
}

namespace {

int precedence(BoolExpr::Kind k) {
    switch (k) {
        case BoolExpr::Kind::Or: return 1;
        case BoolExpr::Kind::And: return 2;
        default: return 3;
    }
}

void print(const BoolExpr& e, std::ostringstream& os, int parent_prec) {
    int prec = precedence(e.kind());
    bool paren = prec < parent_prec;
    if (paren) os << "(";
    switch (e.kind()) {
        case BoolExpr::Kind::True: os << "true"; break;
        case BoolExpr::Kind::False: os << "false"; break;
        case BoolExpr::Kind::Cmp:
            os << e.lhs().text() << rel_op_text(e.op()) << e.rhs().text();
            break;
        case BoolExpr::Kind::Not:
            os << "!";
            {
                // Operand of ! must be parenthesized unless atomic.
                const BoolExpr& c = e.child(0);
                bool atomic = c.kind() == BoolExpr::Kind::True ||
                              c.kind() == BoolExpr::Kind::False;
                if (atomic) {
                    print(c, os, 0);
                } else {
                    os << "(";
                    print(c, os, 0);
                    os << ")";
                }
            }
            break;
        case BoolExpr::Kind::And:
            print(e.child(0), os, prec);
            os << "&&";
            print(e.child(1), os, prec);
            break;
        case BoolExpr::Kind::Or:
            print(e.child(0), os, prec);
            os << "||";
            print(e.child(1), os, prec);
            break;
    }
    if (paren) os << ")";
}

}  // namespace

std::string BoolExpr::text() const {
    std::ostringstream os;
    print(*this, os, 0);
    return os.str();
}

}  // namespace impcheck
