#include "impcheck/parser.hpp"

#include <cctype>
#include <set>

namespace impcheck {

namespace {

enum class Tok {
    Ident, Number, KwVar, KwHavoc, KwAssume, KwAssert, KwIf, KwElse, KwWhile,
    KwTrue, KwFalse, Assign, Plus, Minus, Star, Semi, Comma, LParen, RParen,
    LBrace, RBrace, Lt, Le, Gt, Ge, EqEq, Ne, AndAnd, OrOr, Bang, End,
};

struct Token {
    Tok kind;
    std::string text;
    int line, col;
};

class Lexer {
  public:
    explicit Lexer(const std::string& src) : src_(src) { advance(); }

    const Token& peek() const { return tok_; }
    Token take() {
        Token t = tok_;
        advance();
        return t;
    }

  private:
    void advance() {
        skip_ws();
        tok_.line = line_;
        tok_.col = col_;
        if (pos_ >= src_.size()) {
            tok_.kind = Tok::End;
            tok_.text.clear();
            return;
        }
        char c = src_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string id;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                id.push_back(get());
            tok_.text = id;
            if (id == "var") tok_.kind = Tok::KwVar;
            else if (id == "havoc") tok_.kind = Tok::KwHavoc;
            else if (id == "assume") tok_.kind = Tok::KwAssume;
            else if (id == "assert") tok_.kind = Tok::KwAssert;
            else if (id == "if") tok_.kind = Tok::KwIf;
            else if (id == "else") tok_.kind = Tok::KwElse;
            else if (id == "while") tok_.kind = Tok::KwWhile;
            else if (id == "true") tok_.kind = Tok::KwTrue;
            else if (id == "false") tok_.kind = Tok::KwFalse;
            else tok_.kind = Tok::Ident;
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::string num;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
                num.push_back(get());
            tok_.kind = Tok::Number;
            tok_.text = num;
            return;
        }
        get();
        switch (c) {
            case '+': tok_.kind = Tok::Plus; return;
            case '-': tok_.kind = Tok::Minus; return;
            case '*': tok_.kind = Tok::Star; return;
            case ';': tok_.kind = Tok::Semi; return;
            case ',': tok_.kind = Tok::Comma; return;
            case '(': tok_.kind = Tok::LParen; return;
            case ')': tok_.kind = Tok::RParen; return;
            case '{': tok_.kind = Tok::LBrace; return;
            case '}': tok_.kind = Tok::RBrace; return;
            case ':':
                if (pos_ < src_.size() && src_[pos_] == '=') {
                    get();
                    tok_.kind = Tok::Assign;
                    return;
                }
                fail("expected ':='");
                return;
            case '<':
                if (pos_ < src_.size() && src_[pos_] == '=') { get(); tok_.kind = Tok::Le; }
                else tok_.kind = Tok::Lt;
                return;
            case '>':
                if (pos_ < src_.size() && src_[pos_] == '=') { get(); tok_.kind = Tok::Ge; }
                else tok_.kind = Tok::Gt;
                return;
            case '=':
                if (pos_ < src_.size() && src_[pos_] == '=') { get(); tok_.kind = Tok::EqEq; return; }
                fail("expected '=='");
                return;
            case '!':
                if (pos_ < src_.size() && src_[pos_] == '=') { get(); tok_.kind = Tok::Ne; }
                else tok_.kind = Tok::Bang;
                return;
            case '&':
                if (pos_ < src_.size() && src_[pos_] == '&') { get(); tok_.kind = Tok::AndAnd; return; }
                fail("expected '&&'");
                return;
            case '|':
                if (pos_ < src_.size() && src_[pos_] == '|') { get(); tok_.kind = Tok::OrOr; return; }
                fail("expected '||'");
                return;
            default: fail(std::string("unexpected character '") + c + "'");
        }
    }

    void skip_ws() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
                while (pos_ < src_.size() && src_[pos_] != '\n') get();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                get();
            } else {
                break;
            }
        }
    }

    char get() {
        char c = src_[pos_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return c;
    }

    [[noreturn]] void fail(const std::string& msg) { throw ParseError(line_, col_, msg); }

    const std::string& src_;
    size_t pos_ = 0;
    int line_ = 1, col_ = 1;
    Token tok_;
};

class Parser {
  public:
    explicit Parser(const std::string& src) : lex_(src) {}

    Program program() {
        Program p;
        while (at(Tok::KwVar)) {
            take();
            p.vars.push_back(expect(Tok::Ident, "variable name").text);
            while (at(Tok::Comma)) {
                take();
                p.vars.push_back(expect(Tok::Ident, "variable name").text);
            }
            expect(Tok::Semi, "';'");
        }
        for (const auto& v : p.vars) declared_.insert(v);
        check_declared_ = true;
        while (!at(Tok::End)) p.body.push_back(stmt());
        return p;
    }

    Statement statement_label() {
        std::vector<Statement> parts;
        parts.push_back(atomic_statement());
        while (at(Tok::Semi)) {
            take();
            if (at(Tok::End)) break;
            parts.push_back(atomic_statement());
        }
        expect(Tok::End, "end of statement");
        return parts.size() == 1 ? parts[0] : Statement::seq(parts);
    }

    BoolExpr bool_expr_all() {
        BoolExpr b = bexpr();
        expect(Tok::End, "end of expression");
        return b;
    }

    LinExpr lin_expr_all() {
        LinExpr e = linexpr();
        expect(Tok::End, "end of expression");
        return e;
    }

  private:
    bool at(Tok k) const { return lex_.peek().kind == k; }
    Token take() { return lex_.take(); }
    Token expect(Tok k, const std::string& what) {
        if (!at(k)) fail("expected " + what);
        return take();
    }
    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(lex_.peek().line, lex_.peek().col, msg);
    }

    void check_var(const Token& t) {
        if (check_declared_ && !declared_.count(t.text))
            throw ParseError(t.line, t.col, "use of undeclared variable '" + t.text + "'");
    }

    AstStmt stmt() {
        AstStmt s;
        s.line = lex_.peek().line;
        if (at(Tok::Ident)) {
            Token v = take();
            check_var(v);
            expect(Tok::Assign, "':='");
            s.kind = AstStmt::Kind::Assign;
            s.var = v.text;
            s.rhs = linexpr();
            expect(Tok::Semi, "';'");
            return s;
        }
        if (at(Tok::KwHavoc)) {
            take();
            Token v = expect(Tok::Ident, "variable name");
            check_var(v);
            s.kind = AstStmt::Kind::Havoc;
            s.var = v.text;
            expect(Tok::Semi, "';'");
            return s;
        }
        if (at(Tok::KwAssume) || at(Tok::KwAssert)) {
            bool is_assume = at(Tok::KwAssume);
            take();
            expect(Tok::LParen, "'('");
            s.kind = is_assume ? AstStmt::Kind::Assume : AstStmt::Kind::Assert;
            s.cond = bexpr();
            expect(Tok::RParen, "')'");
            expect(Tok::Semi, "';'");
            return s;
        }
        if (at(Tok::KwIf)) {
            take();
            expect(Tok::LParen, "'('");
            s.kind = AstStmt::Kind::If;
            s.cond = bexpr();
            expect(Tok::RParen, "')'");
            s.then_body = block();
            if (at(Tok::KwElse)) {
                take();
                s.else_body = block();
            }
            return s;
        }
        if (at(Tok::KwWhile)) {
            take();
            expect(Tok::LParen, "'('");
            s.kind = AstStmt::Kind::While;
            s.cond = bexpr();
            expect(Tok::RParen, "')'");
            s.then_body = block();
            return s;
        }
        fail("expected statement");
    }

    std::vector<AstStmt> block() {
        expect(Tok::LBrace, "'{'");
        std::vector<AstStmt> body;
        while (!at(Tok::RBrace)) body.push_back(stmt());
        take();
        return body;
    }

    Statement atomic_statement() {
        if (at(Tok::KwAssume)) {
            take();
            expect(Tok::LParen, "'('");
            BoolExpr b = bexpr();
            expect(Tok::RParen, "')'");
            return Statement::assume(std::move(b));
        }
        if (at(Tok::KwHavoc)) {
            take();
            Token v = expect(Tok::Ident, "variable name");
            check_var(v);
            return Statement::havoc(v.text);
        }
        Token v = expect(Tok::Ident, "variable name");
        check_var(v);
        expect(Tok::Assign, "':='");
        return Statement::assign(v.text, linexpr());
    }

    BoolExpr bexpr() {
        BoolExpr b = band();
        while (at(Tok::OrOr)) {
            take();
            b = BoolExpr::disj(std::move(b), band());
        }
        return b;
    }

    BoolExpr band() {
        BoolExpr b = bnot();
        while (at(Tok::AndAnd)) {
            take();
            b = BoolExpr::conj(std::move(b), bnot());
        }
        return b;
    }

    BoolExpr bnot() {
        if (at(Tok::Bang)) {
            take();
            return BoolExpr::negation(bnot());
        }
        if (at(Tok::KwTrue)) {
            take();
            return BoolExpr::literal(true);
        }
        if (at(Tok::KwFalse)) {
            take();
            return BoolExpr::literal(false);
        }
        if (at(Tok::LParen)) {
            take();
            BoolExpr b = bexpr();
            expect(Tok::RParen, "')'");
            return b;
        }
        LinExpr lhs = linexpr();
        RelOp op;
        if (at(Tok::Lt)) op = RelOp::Lt;
        else if (at(Tok::Le)) op = RelOp::Le;
        else if (at(Tok::Gt)) op = RelOp::Gt;
        else if (at(Tok::Ge)) op = RelOp::Ge;
        else if (at(Tok::EqEq)) op = RelOp::Eq;
        else if (at(Tok::Ne)) op = RelOp::Ne;
        else { fail("expected comparison operator"); }
        take();
        return BoolExpr::cmp(op, std::move(lhs), linexpr());
    }

    LinExpr linexpr() {
        LinExpr e = linterm();
        while (at(Tok::Plus) || at(Tok::Minus)) {
            bool plus = at(Tok::Plus);
            take();
            LinExpr t = linterm();
            e = plus ? e + t : e - t;
        }
        return e;
    }

    // integer | ident | integer '*' ident | '-' term
    LinExpr linterm() {
        if (at(Tok::Minus)) {
            take();
            return -linterm();
        }
        if (at(Tok::Number)) {
            Token n = take();
            Int value(n.text);
            if (at(Tok::Star)) {
                take();
                Token v = expect(Tok::Ident, "variable after '*'");
                check_var(v);
                return LinExpr::variable(v.text, value);
            }
            return LinExpr::constant(value);
        }
        if (at(Tok::Ident)) {
            Token v = take();
            check_var(v);
            if (at(Tok::Star))
                throw ParseError(lex_.peek().line, lex_.peek().col,
                                 "non-linear expression: only 'integer * variable' products are allowed");
            return LinExpr::variable(v.text);
        }
        fail("expected expression");
    }

    Lexer lex_;
    std::set<std::string> declared_;
    bool check_declared_ = false;
};

}  // namespace

Program parse_program(const std::string& source) {
    Parser p(source);
    return p.program();
}

Statement parse_statement(const std::string& text) {
    Parser p(text);
    return p.statement_label();
}

BoolExpr parse_bool_expr(const std::string& text) {
    Parser p(text);
    return p.bool_expr_all();
}

LinExpr parse_lin_expr(const std::string& text) {
    Parser p(text);
    return p.lin_expr_all();
}

}  // namespace impcheck
