#pragma once

#include <stdexcept>
#include <string>

#include "impcheck/ast.hpp"
#include "impcheck/statement.hpp"

namespace impcheck {

class ParseError : public std::runtime_error {
  public:
    ParseError(int line, int col, const std::string& message)
        : std::runtime_error("parse error at " + std::to_string(line) + ":" +
                             std::to_string(col) + ": " + message),
          line_(line),
          col_(col) {}
    int line() const { return line_; }
    int col() const { return col_; }

  private:
    int line_, col_;
};

// Parses a whole program (declarations followed by statements). Rejects
// undeclared variables and non-linear expressions.
Program parse_program(const std::string& source);

// Parses a single alphabet letter such as "x:=0;y:=42", "assume(x<100)" or
// "havoc n". No declaration checking.
Statement parse_statement(const std::string& text);

BoolExpr parse_bool_expr(const std::string& text);
LinExpr parse_lin_expr(const std::string& text);

}  // namespace impcheck
