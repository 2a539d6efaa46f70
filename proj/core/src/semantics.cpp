#include "impcheck/semantics.hpp"

#include <functional>
#include <stdexcept>

namespace impcheck {

Int eval(const LinExpr& e, const ConcreteState& sigma) {
    Int v = e.constant_part();
    for (const auto& [var, coeff] : e.terms()) {
        auto it = sigma.find(var);
        if (it == sigma.end()) throw std::logic_error("eval: unbound variable " + var);
        v += coeff * it->second;
    }
    return v;
}

bool eval(const BoolExpr& e, const ConcreteState& sigma) {
    switch (e.kind()) {
        case BoolExpr::Kind::True: return true;
        case BoolExpr::Kind::False: return false;
        case BoolExpr::Kind::Cmp: {
            Int l = eval(e.lhs(), sigma), r = eval(e.rhs(), sigma);
            switch (e.op()) {
                case RelOp::Lt: return l < r;
                case RelOp::Le: return l <= r;
                case RelOp::Gt: return l > r;
                case RelOp::Ge: return l >= r;
                case RelOp::Eq: return l == r;
                case RelOp::Ne: return l != r;
            }
            throw std::logic_error("bad RelOp");
        }
        case BoolExpr::Kind::Not: return !eval(e.child(0), sigma);
        case BoolExpr::Kind::And: return eval(e.child(0), sigma) && eval(e.child(1), sigma);
        case BoolExpr::Kind::Or: return eval(e.child(0), sigma) || eval(e.child(1), sigma);
    }
    throw std::logic_error("bad BoolExpr kind");
}

std::vector<ConcreteState> step(const Statement& s, const ConcreteState& sigma,
                                const std::optional<Box>& havoc_box, size_t enumeration_cap) {
    switch (s.kind()) {
        case Statement::Kind::Assume:
            if (eval(s.guard(), sigma)) return {sigma};
            return {};
        case Statement::Kind::Assign: {
            ConcreteState next = sigma;
            next[s.var()] = eval(s.rhs(), sigma);
            return {next};
        }
        case Statement::Kind::Havoc: {
            if (!havoc_box) throw std::logic_error("step: havoc needs a box");
            std::vector<ConcreteState> out;
            for (Int v = havoc_box->lo; v <= havoc_box->hi; ++v) {
                ConcreteState next = sigma;
                next[s.var()] = v;
                out.push_back(std::move(next));
                if (out.size() > enumeration_cap)
                    throw std::runtime_error("step: enumeration cap exceeded");
            }
            return out;
        }
        case Statement::Kind::Seq: {
            std::vector<ConcreteState> out;
            for (const auto& mid : step(s.first(), sigma, havoc_box, enumeration_cap)) {
                for (auto& fin : step(s.second(), mid, havoc_box, enumeration_cap)) {
                    out.push_back(std::move(fin));
                    if (out.size() > enumeration_cap)
                        throw std::runtime_error("step: enumeration cap exceeded");
                }
            }
            return out;
        }
    }
    throw std::logic_error("bad Statement kind");
}

bool in_rho(const Statement& s, const ConcreteState& pre, const ConcreteState& post) {
    switch (s.kind()) {
        case Statement::Kind::Assume: return eval(s.guard(), pre) && pre == post;
        case Statement::Kind::Assign: {
            ConcreteState expect = pre;
            expect[s.var()] = eval(s.rhs(), pre);
            return expect == post;
        }
        case Statement::Kind::Havoc: {
            for (const auto& [var, value] : pre) {
                if (var == s.var()) continue;
                auto it = post.find(var);
                if (it == post.end() || it->second != value) return false;
            }
            return post.size() == pre.size() && post.count(s.var());
        }
        case Statement::Kind::Seq: {
            if (s.contains_havoc())
                throw std::logic_error("in_rho: havoc inside a fused statement");
            ConcreteState cur = pre;
            for (const auto& leaf : s.leaves()) {
                auto succ = step(leaf, cur);
                if (succ.empty()) return false;
                cur = std::move(succ[0]);
            }
            return cur == post;
        }
    }
    throw std::logic_error("bad Statement kind");
}

std::variant<Execution, InfeasibleAt> execute_trace(const Word& trace,
                                                    const ConcreteState& initial,
                                                    const std::vector<Int>& havoc_schedule) {
    Execution exec;
    exec.states.push_back(initial);
    size_t next_havoc = 0;
    for (size_t i = 0; i < trace.size(); ++i) {
        ConcreteState cur = exec.states.back();
        bool stuck = false;
        for (const auto& leaf : trace[i].leaves()) {
            if (leaf.kind() == Statement::Kind::Havoc) {
                Int v = next_havoc < havoc_schedule.size() ? havoc_schedule[next_havoc]
                                                           : cur[leaf.var()];
                ++next_havoc;
                cur[leaf.var()] = v;
                continue;
            }
            auto succ = step(leaf, cur);
            if (succ.empty()) {
                stuck = true;
                break;
            }
            cur = std::move(succ[0]);
        }
        if (stuck) return InfeasibleAt{i};
        exec.states.push_back(std::move(cur));
    }
    return exec;
}

bool oracle_feasible(const Word& trace, const std::vector<std::string>& vars, const Box& box,
                     size_t enumeration_cap) {
    // Depth-first over initial values, then over havoc choices statement by
    // statement.
    size_t budget = enumeration_cap;

    std::function<bool(size_t, const ConcreteState&)> run = [&](size_t i,
                                                                const ConcreteState& sigma) -> bool {
        if (i == trace.size()) return true;
        std::vector<ConcreteState> succ = step(trace[i], sigma, Box{box.lo, box.hi}, budget);
        for (const auto& next : succ) {
            if (budget == 0) throw std::runtime_error("oracle_feasible: enumeration cap exceeded");
            --budget;
            if (run(i + 1, next)) return true;
        }
        return false;
    };

    ConcreteState sigma;
    std::function<bool(size_t)> enum_init = [&](size_t idx) -> bool {
        if (idx == vars.size()) return run(0, sigma);
        for (Int v = box.lo; v <= box.hi; ++v) {
            if (budget == 0) throw std::runtime_error("oracle_feasible: enumeration cap exceeded");
            --budget;
            sigma[vars[idx]] = v;
            if (enum_init(idx + 1)) return true;
        }
        sigma.erase(vars[idx]);
        return false;
    };
    return enum_init(0);
}

}  // namespace impcheck
