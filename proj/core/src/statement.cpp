#include "impcheck/statement.hpp"

#include <sstream>
#include <stdexcept>

namespace impcheck {

namespace {

std::string leaf_text(Statement::Kind kind, const BoolExpr* guard,
                      const std::string& var, const LinExpr* rhs) {
    switch (kind) {
        case Statement::Kind::Assume: return "assume(" + guard->text() + ")";
        case Statement::Kind::Assign: return var + ":=" + rhs->text();
        case Statement::Kind::Havoc: return "havoc " + var;
        default: throw std::logic_error("not a leaf");
    }
}

}  // namespace

Statement Statement::assume(BoolExpr guard) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Assume;
    n->guard = std::make_shared<const BoolExpr>(std::move(guard));
    std::string t = leaf_text(n->kind, n->guard.get(), "", nullptr);
    return Statement(std::move(n), std::move(t));
}

Statement Statement::assign(std::string var, LinExpr rhs) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Assign;
    n->var = std::move(var);
    n->rhs = std::move(rhs);
    std::string t = leaf_text(n->kind, nullptr, n->var, &n->rhs);
    return Statement(std::move(n), std::move(t));
}

Statement Statement::havoc(std::string var) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Havoc;
    n->var = std::move(var);
    std::string t = leaf_text(n->kind, nullptr, n->var, nullptr);
    return Statement(std::move(n), std::move(t));
}

Statement Statement::seq(Statement first, Statement second) {
    std::vector<Statement> parts = first.leaves();
    for (auto& s : second.leaves()) parts.push_back(std::move(s));
    return seq(parts);
}

// Canonical form: right-associated chain of leaves.
Statement Statement::seq(const std::vector<Statement>& parts) {
    if (parts.empty()) throw std::logic_error("empty statement sequence");
    std::vector<Statement> flat;
    for (const auto& p : parts)
        for (auto& l : p.leaves()) flat.push_back(std::move(l));
    Statement acc = flat.back();
    for (size_t i = flat.size() - 1; i-- > 0;) {
        auto n = std::make_shared<Node>();
        n->kind = Kind::Seq;
        n->first = std::make_shared<const Statement>(flat[i]);
        n->second = std::make_shared<const Statement>(std::move(acc));
        std::string t = flat[i].text() + ";" + n->second->text();
        acc = Statement(std::move(n), std::move(t));
    }
    return acc;
}

std::vector<Statement> Statement::leaves() const {
    std::vector<Statement> out;
    const Statement* cur = this;
    while (cur->kind() == Kind::Seq) {
        for (auto& l : cur->first().leaves()) out.push_back(std::move(l));
        cur = &cur->second();
    }
    out.push_back(*cur);
    return out;
}

bool Statement::contains_havoc() const {
    if (kind() == Kind::Havoc) return true;
    if (kind() == Kind::Seq) return first().contains_havoc() || second().contains_havoc();
    return false;
}

void Statement::collect_vars(std::set<std::string>& out) const {
    switch (kind()) {
        case Kind::Assume: guard().collect_vars(out); break;
        case Kind::Assign:
            out.insert(var());
            rhs().collect_vars(out);
            break;
        case Kind::Havoc: out.insert(var()); break;
        case Kind::Seq:
            first().collect_vars(out);
            second().collect_vars(out);
            break;
    }
}

std::string word_text(const Word& w) {
    std::ostringstream os;
    for (size_t i = 0; i < w.size(); ++i) {
        if (i) os << " . ";
        os << w[i].text();
    }
    return os.str();
}

}  // namespace impcheck
