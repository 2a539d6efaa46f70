#include <doctest.h>

#include "helpers.hpp"
#include "impcheck/semantics.hpp"

using namespace impcheck;
using namespace testutil;

TEST_CASE("expression evaluation") {
    ConcreteState s{{"x", 0}, {"y", 42}};
    CHECK(eval(parse_lin_expr("x+1"), s) == 1);
    CHECK_FALSE(eval(parse_bool_expr("x>=100"), s));
    ConcreteState t{{"x", 100}, {"y", 42}};
    CHECK_FALSE(eval(parse_bool_expr("x!=100||y!=42"), t));
    CHECK(eval(parse_bool_expr("x!=100||y!=42"), s));
}

TEST_CASE("step on the paper's opening moves") {
    ConcreteState s{{"x", 0}, {"y", 42}};
    auto r1 = step(parse_statement("assume(x<100)"), s);
    REQUIRE(r1.size() == 1);
    CHECK(r1[0] == s);

    auto r2 = step(parse_statement("x:=x+1"), s);
    REQUIRE(r2.size() == 1);
    CHECK(r2[0].at("x") == 1);
    CHECK(r2[0].at("y") == 42);

    ConcreteState u{{"x", 1}, {"y", 42}};
    CHECK(step(parse_statement("assume(x>=100)"), u).empty());
}

TEST_CASE("statements without havoc have at most one successor") {
    Rng rng(9001);
    auto vars = small_vars(3);
    for (int i = 0; i < 200; ++i) {
        Statement s = random_statement(rng, vars, /*allow_havoc=*/false);
        ConcreteState sigma;
        for (const auto& v : vars) sigma[v] = pick(rng, -8, 8);
        CHECK(step(s, sigma).size() <= 1);
    }
}

TEST_CASE("sequential composition is associative") {
    Rng rng(9002);
    auto vars = small_vars(2);
    for (int i = 0; i < 100; ++i) {
        Statement a = random_leaf_statement(rng, vars, false);
        Statement b = random_leaf_statement(rng, vars, false);
        Statement c = random_leaf_statement(rng, vars, false);
        Statement left = Statement::seq(Statement::seq(a, b), c);
        Statement right = Statement::seq(a, Statement::seq(b, c));
        CHECK(left == right);
        ConcreteState sigma{{"x", pick(rng, -5, 5)}, {"y", pick(rng, -5, 5)}};
        CHECK(step(left, sigma) == step(right, sigma));
    }
}

TEST_CASE("execute_trace on the paper's traces") {
    ConcreteState sigma{{"x", -7}, {"y", 3}};
    auto r1 = execute_trace(tau1(), sigma);
    REQUIRE(std::holds_alternative<InfeasibleAt>(r1));
    CHECK(std::get<InfeasibleAt>(r1).index == 1);

    Word prefix = parse_word({"x:=0;y:=42", "assume(x<100)", "x:=x+1", "assume(y>0)"});
    auto r2 = execute_trace(prefix, sigma);
    REQUIRE(std::holds_alternative<Execution>(r2));
    const auto& exec = std::get<Execution>(r2);
    CHECK(exec.states.size() == 5);
    CHECK(exec.states.back().at("x") == 1);
    CHECK(exec.states.back().at("y") == 42);

    auto r3 = execute_trace({}, sigma);
    REQUIRE(std::holds_alternative<Execution>(r3));
    CHECK(std::get<Execution>(r3).states == std::vector<ConcreteState>{sigma});
}

TEST_CASE("in_rho matches step") {
    Rng rng(9003);
    auto vars = small_vars(2);
    for (int i = 0; i < 100; ++i) {
        Statement s = random_statement(rng, vars, false);
        ConcreteState sigma{{"x", pick(rng, -5, 5)}, {"y", pick(rng, -5, 5)}};
        auto succ = step(s, sigma);
        for (const auto& nxt : succ) CHECK(in_rho(s, sigma, nxt));
        ConcreteState off = sigma;
        off["x"] += 1000;
        CHECK_FALSE(in_rho(s, sigma, off));
    }
    ConcreteState sigma{{"x", 3}};
    ConcreteState other{{"x", -2}};
    CHECK(in_rho(Statement::havoc("x"), sigma, other));
}

TEST_CASE("oracle_feasible refutes the paper's traces") {
    std::vector<std::string> vars{"x", "y"};
    Box box{-200, 200};
    CHECK_FALSE(oracle_feasible(tau1(), vars, box));
    CHECK_FALSE(oracle_feasible(tau2(), vars, box));
    Word havoc_trace = parse_word({"havoc x", "assume(x==7)"});
    CHECK(oracle_feasible(havoc_trace, {"x"}, Box{0, 10}));
}

TEST_CASE("oracle cap guards enumeration") {
    // Unsatisfiable within the box, so enumeration has to run dry.
    Word w = parse_word({"havoc x", "havoc y", "havoc z", "assume(x==y+z+1000)"});
    CHECK_THROWS_AS(oracle_feasible(w, {"x", "y", "z"}, Box{-200, 200}, 1000),
                    std::runtime_error);
}

TEST_CASE("execute_trace agrees with the oracle on determined traces") {
    Rng rng(9004);
    auto vars = small_vars(2);
    for (int round = 0; round < 30; ++round) {
        // Leading assignments fix every variable, so feasibility does not
        // depend on the initial state.
        Word w;
        w.push_back(Statement::assign("x", LinExpr::constant(pick(rng, -3, 3))));
        w.push_back(Statement::assign("y", LinExpr::constant(pick(rng, -3, 3))));
        for (int i = 0; i < pick(rng, 1, 4); ++i)
            w.push_back(random_leaf_statement(rng, vars, false));
        ConcreteState sigma{{"x", 0}, {"y", 0}};
        bool direct = std::holds_alternative<Execution>(execute_trace(w, sigma));
        bool oracle = oracle_feasible(w, vars, Box{-10, 10});
        CHECK(direct == oracle);
    }
}
