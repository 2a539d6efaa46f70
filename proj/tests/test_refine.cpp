#include <doctest.h>

#include "helpers.hpp"
#include "impcheck/fixpoint.hpp"
#include "impcheck/pathprog.hpp"
#include "impcheck/refine.hpp"

using namespace impcheck;
using namespace testutil;
using namespace impcheck::refine;
using domains::DomainKind;
using linsolve::Tri;

namespace {

Predicate pred(const std::string& b) { return Predicate::from_bool_expr(parse_bool_expr(b)); }

bool equivalent(const Predicate& a, const Predicate& b) {
    return linsolve::entails(a, b) == Tri::True && linsolve::entails(b, a) == Tri::True;
}

bool has_transition(const automata::FloydHoareAutomaton& a, int src, const std::string& stmt,
                    int dst) {
    for (const auto& t : a.transitions)
        if (t.src == src && t.dst == dst && t.stmt.text() == stmt) return true;
    return false;
}

}  // namespace

TEST_CASE("strongest postconditions along the paper's first proof") {
    Predicate p1 = sp(Predicate::top(), parse_statement("x:=0;y:=42"));
    CHECK(equivalent(p1, pred("x==0&&y==42")));

    Predicate p2 = sp(p1, parse_statement("x:=x+1"));
    CHECK(equivalent(p2, pred("x==1&&y==42")));

    Predicate p3 = sp(p2, parse_statement("assume(x>=100)"));
    CHECK(p3.is_false());
}

TEST_CASE("sp handles havoc by projection") {
    Predicate p = sp(pred("x==0&&y==42"), parse_statement("havoc x"));
    CHECK(equivalent(p, pred("y==42")));
}

TEST_CASE("sp is the strongest box-exact transformer on random inputs") {
    Rng rng(19001);
    std::vector<std::string> vars{"x", "y"};
    int rounds = 0;
    for (int i = 0; i < 60; ++i) {
        Predicate phi = random_predicate(rng, vars, 1, 2);
        Statement st = random_statement(rng, vars, false);
        Predicate image = sp(phi, st);
        CompiledPred cphi = compile_pred(phi, vars);
        CompiledPred cimg = compile_pred(image, vars);
        bool any = false;
        for (long long x = -8; x <= 8; ++x) {
            for (long long y = -8; y <= 8; ++y) {
                if (!cphi.eval({x, y})) continue;
                any = true;
                ConcreteState sigma{{"x", Int((long)x)}, {"y", Int((long)y)}};
                for (const auto& succ : step(st, sigma)) {
                    // Soundness: every concrete successor is in the image.
                    CHECK(cimg.eval({succ.at("x").get_si(), succ.at("y").get_si()}));
                }
            }
        }
        if (any) ++rounds;
    }
    CHECK(rounds > 15);
}

TEST_CASE("analyze_trace refutes tau1 at the paper's position") {
    auto result = analyze_trace(tau1(), {"x", "y"});
    REQUIRE(std::holds_alternative<Infeasible>(result));
    const auto& seq = std::get<Infeasible>(result).sequence;
    REQUIRE(seq.preds.size() == 4);
    CHECK(seq.first_false == 2);
    CHECK(seq.preds[0].is_true());
    CHECK(equivalent(seq.preds[1], pred("x==0&&y==42")));
    CHECK(seq.preds[2].is_false());
    CHECK(seq.preds[3].is_false());
    // Hoare validity of every step.
    for (size_t i = 0; i < tau1().size(); ++i)
        CHECK(check_hoare(seq.preds[i], tau1()[i], seq.preds[i + 1]) == Tri::True);
}

TEST_CASE("analyze_trace refutes tau2 at the paper's position") {
    auto result = analyze_trace(tau2(), {"x", "y"});
    REQUIRE(std::holds_alternative<Infeasible>(result));
    const auto& seq = std::get<Infeasible>(result).sequence;
    REQUIRE(seq.preds.size() == 7);
    CHECK(seq.first_false == 5);
    Word t = tau2();
    for (size_t i = 0; i < t.size(); ++i)
        CHECK(check_hoare(seq.preds[i], t[i], seq.preds[i + 1]) == Tri::True);
}

TEST_CASE("analyze_trace finds havoc witnesses") {
    Word w = parse_word({"havoc x", "assume(x==7)"});
    auto result = analyze_trace(w, {"x"});
    REQUIRE(std::holds_alternative<Feasible>(result));
    const auto& f = std::get<Feasible>(result);
    CHECK(f.execution.states.back().at("x") == 7);
    REQUIRE(f.havoc_schedule.size() == 1);
    CHECK(f.havoc_schedule[0] == 7);
}

TEST_CASE("infeasible traces stay infeasible under the oracle") {
    Rng rng(19002);
    std::vector<std::string> vars{"x", "y"};
    int refuted = 0;
    for (int i = 0; i < 40; ++i) {
        Word w;
        int len = pick(rng, 1, 4);
        for (int j = 0; j < len; ++j) w.push_back(random_statement(rng, vars, false));
        auto result = analyze_trace(w, vars);
        if (std::holds_alternative<Infeasible>(result)) {
            ++refuted;
            CHECK_FALSE(oracle_feasible(w, vars, Box{-15, 15}));
        }
    }
    CHECK(refuted > 3);
}

TEST_CASE("check_hoare abstract mode matches the enhancement examples") {
    auto vars = domains::make_varset({"x", "y"});
    Predicate inv = pred("0<=x&&x<=100&&y==42");
    CHECK(check_hoare_abstract(DomainKind::Interval, vars, inv, parse_statement("y:=42"), inv));
    CHECK_FALSE(
        check_hoare_abstract(DomainKind::Interval, vars, inv, parse_statement("x:=x+1"), inv));
    CHECK(check_hoare(Predicate::bottom(), parse_statement("x:=x+1"), Predicate::bottom()) ==
          Tri::True);
    CHECK_THROWS_AS(check_hoare_abstract(DomainKind::Interval, vars, pred("x-y<=0"),
                                         parse_statement("y:=42"), inv),
                    std::invalid_argument);
}

TEST_CASE("sequence automata generalize the proof") {
    ProgramAutomaton pa = lower(parse_program(p1_source()));
    auto result = analyze_trace(tau1(), pa.vars);
    REQUIRE(std::holds_alternative<Infeasible>(result));
    const auto& seq = std::get<Infeasible>(result).sequence;
    auto a = automaton_from_sequence(tau1(), seq, pa.alphabet());

    CHECK(a.num_states == 3);  // true, x=0&&y=42, false
    CHECK(automata::accepts(a, tau1()));
    // Generalization: after reaching false anything is accepted.
    CHECK(automata::accepts(a, parse_word({"x:=0;y:=42", "assume(x>=100)", "assume(x<100)"})));
    // The y<=0 guard also contradicts x=0&&y=42.
    CHECK(automata::accepts(
        a, parse_word({"x:=0;y:=42", "assume(y<=0)", "assume(x!=100||y!=42)"})));
    // tau2 must not be accepted: its x:=x+1 leaves the invariant state.
    CHECK_FALSE(automata::accepts(a, tau2()));
    CHECK(audit_automaton(a).empty());
}

TEST_CASE("single contradictory assume yields the two-state automaton") {
    Word w = parse_word({"assume(false)"});
    auto result = analyze_trace(w, {"x"});
    REQUIRE(std::holds_alternative<Infeasible>(result));
    auto a = automaton_from_sequence(w, std::get<Infeasible>(result).sequence,
                                     {parse_statement("x:=x+1"), w[0]});
    CHECK(a.num_states == 2);
    // Σ self-loops on the false state.
    CHECK(has_transition(a, 1, "x:=x+1", 1));
    CHECK(has_transition(a, 1, "assume(false)", 1));
    CHECK(automata::accepts(a, w));
}

TEST_CASE("duplicate predicates merge into one state") {
    // x:=5 twice: the predicate after each assignment is identical.
    Word w = parse_word({"x:=5", "x:=5", "assume(x<0)"});
    auto result = analyze_trace(w, {"x"});
    REQUIRE(std::holds_alternative<Infeasible>(result));
    const auto& seq = std::get<Infeasible>(result).sequence;
    auto a = automaton_from_sequence(w, seq, {});
    CHECK(a.num_states == 3);  // true, x==5 (shared), false
}

TEST_CASE("path program automaton reproduces the fixpoint shape") {
    ProgramAutomaton pp_auto = tau2_path_program();
    pathprog::PathProgram pp;
    pp.automaton = pp_auto;
    pp.error_location = 5;
    for (int i = 0; i < 6; ++i) pp.locations.insert(i);
    pp.canonical_key = "test";

    fixpoint::AnalyzeOptions fopts;
    fopts.kind = DomainKind::Interval;
    fixpoint::Annotation ann = fixpoint::analyze(pp_auto, fopts);
    REQUIRE(fixpoint::is_safe(ann, pp_auto));

    auto plain = automaton_from_pathprogram(pp, ann, false, fopts, pp_auto.alphabet());
    CHECK(plain.num_states == 6);
    CHECK(automata::accepts(plain, tau2()));
    CHECK(audit_automaton(plain).empty());
    // Unenhanced: only inherited transitions, so the full-alphabet loop
    // words of the parent are not accepted.
    CHECK(plain.transitions.size() == 6);

    // Enhancement adds the self-loops of the known enhanced automaton.
    ProgramAutomaton parent = lower(parse_program(p1_source()));
    auto enhanced = automaton_from_pathprogram(pp, ann, true, fopts, parent.alphabet());
    CHECK(enhanced.num_states == 6);
    CHECK(automata::accepts(enhanced, tau2()));
    CHECK(audit_automaton(enhanced).empty());
    int l0 = 0, l1 = 1, l2 = 2;
    // State ids follow location order here: l0 -> 0, l1 -> 1, ...
    for (const auto& st : parent.alphabet()) {
        CHECK(has_transition(enhanced, l0, st.text(), l0));
        bool inc = st.text() == "x:=x+1";
        CHECK(has_transition(enhanced, l1, st.text(), l1) == !inc);
        CHECK(has_transition(enhanced, l2, st.text(), l2) == !inc);
    }
    // All loop words of the parent are absorbed.
    Word with_inner = parse_word({"x:=0;y:=42", "assume(x<100)", "x:=x+1", "assume(y<=0)",
                                  "y:=42", "assume(y>0)", "assume(x>=100)",
                                  "assume(x!=100||y!=42)"});
    CHECK(automata::accepts(enhanced, with_inner));

    // Every error word of the path program itself is accepted.
    for (const auto& w : unique_error_words(pp_auto, 10))
        CHECK(automata::accepts(plain, w));
}

TEST_CASE("merged fixpoint predicates collapse states") {
    // Two locations carrying the same invariant merge into one state.
    ProgramAutomaton pa;
    pa.vars = {"x"};
    pa.names = {"l0", "l1", "l2", "l3"};
    pa.initial = 0;
    pa.errors = {3};
    pa.edges = {{0, parse_statement("x:=1"), 1},
                {1, parse_statement("assume(x>=1)"), 2},
                {2, parse_statement("assume(x<1)"), 3}};
    pa.sort_edges();
    fixpoint::AnalyzeOptions fopts;
    fopts.kind = DomainKind::Interval;
    fixpoint::Annotation ann = fixpoint::analyze(pa, fopts);
    REQUIRE(fixpoint::is_safe(ann, pa));
    pathprog::PathProgram pp;
    pp.automaton = pa;
    pp.error_location = 3;
    for (int i = 0; i < 4; ++i) pp.locations.insert(i);
    auto a = automaton_from_pathprogram(pp, ann, false, fopts, pa.alphabet());
    // l1 and l2 both carry x == 1.
    CHECK(a.num_states == 3);
}
