#include "impcheck/smtlib.hpp"

#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

namespace impcheck::smtlib {

namespace {

std::string term(const LinExpr& e) {
    std::vector<std::string> parts;
    for (const auto& [v, c] : e.terms()) {
        if (c == 1) parts.push_back(v);
        else if (c < 0) parts.push_back("(* (- " + to_string(-c) + ") " + v + ")");
        else parts.push_back("(* " + to_string(c) + " " + v + ")");
    }
    if (e.constant_part() != 0 || parts.empty()) {
        Int k = e.constant_part();
        parts.push_back(k < 0 ? "(- " + to_string(-k) + ")" : to_string(k));
    }
    if (parts.size() == 1) return parts[0];
    std::string out = "(+";
    for (const auto& p : parts) out += " " + p;
    return out + ")";
}

std::string literal(const Int& k) {
    return k < 0 ? "(- " + to_string(-k) + ")" : to_string(k);
}

std::string atom(const Atom& a) {
    switch (a.kind) {
        case Atom::Kind::Le: return "(<= " + term(a.expr) + " " + literal(a.bound) + ")";
        case Atom::Kind::Eq: return "(= " + term(a.expr) + " " + literal(a.bound) + ")";
        case Atom::Kind::Cong:
            return "(= (mod " + term(a.expr) + " " + to_string(a.modulus) + ") " +
                   literal(a.bound) + ")";
    }
    return "";
}

std::string cube(const Cube& c) {
    if (c.atoms.empty()) return "true";
    if (c.atoms.size() == 1) return atom(c.atoms[0]);
    std::string out = "(and";
    for (const auto& a : c.atoms) out += " " + atom(a);
    return out + ")";
}

}  // namespace

std::string emit(const Predicate& p) {
    std::ostringstream os;
    os << "(set-logic QF_LIA)\n";
    std::set<std::string> vars;
    p.collect_vars(vars);
    for (const auto& v : vars) os << "(declare-const " << v << " Int)\n";
    if (p.is_false()) {
        os << "(assert false)\n";
    } else if (p.cubes().size() == 1) {
        for (const auto& a : p.cubes()[0].atoms) os << "(assert " << atom(a) << ")\n";
    } else {
        os << "(assert (or";
        for (const auto& c : p.cubes()) os << " " << cube(c);
        os << "))\n";
    }
    os << "(check-sat)\n(get-model)\n";
    return os.str();
}

std::optional<linsolve::SatKind> ExternalSolver::query(const Predicate& p) const {
    if (!enabled()) return std::nullopt;
    char path[] = "/tmp/impcheck_query_XXXXXX";
    int fd = mkstemp(path);
    if (fd < 0) return std::nullopt;
    close(fd);
    {
        std::ofstream out(path);
        out << emit(p);
    }
    std::string cmd = command_ + " " + path + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    std::string first_line;
    if (pipe) {
        char buf[256];
        if (fgets(buf, sizeof buf, pipe)) first_line = buf;
        pclose(pipe);
    }
    std::remove(path);
    if (first_line.rfind("unsat", 0) == 0) return linsolve::SatKind::Unsat;
    if (first_line.rfind("sat", 0) == 0) return linsolve::SatKind::Unknown;
    return std::nullopt;
}

}  // namespace impcheck::smtlib
