#pragma once

#include <map>
#include <optional>
#include <variant>
#include <vector>

#include "impcheck/statement.hpp"

namespace impcheck {

// Total valuation of the declared variables.
using ConcreteState = std::map<std::string, Int>;

// One execution of a trace: states.size() == trace.size() + 1.
struct Execution {
    std::vector<ConcreteState> states;
};

struct Box {
    Int lo = 0, hi = 0;
};

Int eval(const LinExpr& e, const ConcreteState& sigma);
bool eval(const BoolExpr& e, const ConcreteState& sigma);

// Successor states of sigma under s. Havoc enumerates values from the box;
// without a box a havoc statement is an error here.
std::vector<ConcreteState> step(const Statement& s, const ConcreteState& sigma,
                                const std::optional<Box>& havoc_box = std::nullopt,
                                size_t enumeration_cap = 1u << 20);

// Membership test for the successor relation. Seq labels containing havoc
// are not produced by the frontend and are rejected.
bool in_rho(const Statement& s, const ConcreteState& pre, const ConcreteState& post);

struct InfeasibleAt {
    size_t index;
};

// Deterministic replay: each havoc consumes the next value of the schedule,
// or keeps the current value once the schedule is exhausted.
std::variant<Execution, InfeasibleAt> execute_trace(const Word& trace,
                                                    const ConcreteState& initial,
                                                    const std::vector<Int>& havoc_schedule = {});

// Exhaustive feasibility oracle: does any initial state / havoc choice from
// the box execute the whole trace? Exponential; test support only.
bool oracle_feasible(const Word& trace, const std::vector<std::string>& vars, const Box& box,
                     size_t enumeration_cap = 1u << 22);

}  // namespace impcheck
