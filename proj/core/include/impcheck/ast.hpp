#pragma once

#include <optional>
#include <string>
#include <vector>

#include "impcheck/expr.hpp"

namespace impcheck {

struct AstStmt {
    enum class Kind { Assign, Havoc, Assume, Assert, If, While };

    Kind kind;
    std::string var;                  // Assign, Havoc
    std::optional<LinExpr> rhs;       // Assign
    std::optional<BoolExpr> cond;     // Assume, Assert, If, While
    std::vector<AstStmt> then_body;   // If, While
    std::vector<AstStmt> else_body;   // If
    int line = 0;
};

struct Program {
    std::vector<std::string> vars;
    std::vector<AstStmt> body;
};

}  // namespace impcheck
