#include <doctest.h>

#include "helpers.hpp"
#include "impcheck/pathprog.hpp"

using namespace impcheck;
using namespace testutil;
using namespace impcheck::pathprog;

namespace {

automata::Run run_of(const ProgramAutomaton& pa, const Word& w) {
    automata::Run run;
    run.locations.push_back(pa.initial);
    run.word = w;
    int loc = pa.initial;
    for (const auto& st : w) {
        int next = -1;
        for (const auto& e : pa.edges)
            if (e.src == loc && e.stmt == st) next = e.dst;
        REQUIRE(next != -1);
        run.locations.push_back(next);
        loc = next;
    }
    return run;
}

}  // namespace

TEST_CASE("loop detection on the paper's traces") {
    ProgramAutomaton pa = lower(parse_program(p1_source()));
    CHECK_FALSE(has_loop(run_of(pa, tau1()), pa));
    CHECK(has_loop(run_of(pa, tau2()), pa));
}

TEST_CASE("loop detection by cycle label membership") {
    // A single-edge run whose label also occurs on a cycle elsewhere.
    ProgramAutomaton pa;
    pa.vars = {"x"};
    pa.names = {"l0", "l1", "l2"};
    pa.initial = 0;
    pa.errors = {1};
    Statement a = parse_statement("x:=x+1");
    Statement b = parse_statement("assume(x<0)");
    pa.edges = {{0, a, 1}, {0, b, 2}, {2, a, 2}};
    pa.sort_edges();
    automata::Run run;
    run.locations = {0, 1};
    run.word = {a};
    CHECK(has_loop(run, pa));
    automata::Run other;
    other.locations = {0, 2};
    other.word = {b};
    // No revisit, label not on any cycle... b only occurs off-cycle.
    CHECK_FALSE(pa.is_error(2));
}

TEST_CASE("extracting tau2 yields the known path program") {
    ProgramAutomaton pa = lower(parse_program(p1_source()));
    PathProgram pp = extract(run_of(pa, tau2()), pa);
    CHECK(pp.locations.size() == 6);
    CHECK(pp.automaton.edges.size() == 6);
    CHECK(pp.automaton.initial == pa.initial);
    REQUIRE(pp.automaton.errors.size() == 1);
    CHECK(pp.error_location == *pa.errors.begin());
    // The back edge of the outer loop survives; the inner loop does not.
    bool has_back = false, has_inner = false;
    for (const auto& e : pp.automaton.edges) {
        if (e.stmt.text() == "assume(y>0)") has_back = true;
        if (e.stmt.text() == "assume(y<=0)" || e.stmt.text() == "y:=42") has_inner = true;
    }
    CHECK(has_back);
    CHECK_FALSE(has_inner);
}

TEST_CASE("loop-free runs extract to linear path programs") {
    ProgramAutomaton pa = lower(parse_program(p1_source()));
    PathProgram pp = extract(run_of(pa, tau1()), pa);
    CHECK(pp.locations.size() == 4);
    CHECK(pp.automaton.edges.size() == 3);
}

TEST_CASE("repeated edges collapse in the edge set") {
    ProgramAutomaton pa = lower(parse_program(p1_source()));
    // Unroll the outer loop twice.
    Word twice = parse_word({"x:=0;y:=42", "assume(x<100)", "x:=x+1", "assume(y>0)",
                             "assume(x<100)", "x:=x+1", "assume(y>0)", "assume(x>=100)",
                             "assume(x!=100||y!=42)"});
    PathProgram once = extract(run_of(pa, tau2()), pa);
    PathProgram again = extract(run_of(pa, twice), pa);
    CHECK(again.automaton.edges.size() == 6);
    CHECK(once.canonical_key == again.canonical_key);
}

TEST_CASE("path program cache membership") {
    ProgramAutomaton pa = lower(parse_program(p1_source()));
    PathProgram pp = extract(run_of(pa, tau2()), pa);
    PathProgramCache cache;
    CHECK_FALSE(cache.seen_before(pp));
    cache.remember(pp);
    CHECK(cache.seen_before(pp));
    cache.remember(pp);
    CHECK(cache.size() == 1);
}

TEST_CASE("path program words replay onto the parent program") {
    ProgramAutomaton pa = lower(parse_program(p1_source()));
    PathProgram pp = extract(run_of(pa, tau2()), pa);
    CHECK(replays_to_error(pp.automaton, tau2()));
    for (const auto& w : unique_error_words(pp.automaton, 9)) {
        CHECK(replays_to_error(pa, w));
    }
}

TEST_CASE("label projection mode keeps same-labeled edges") {
    // Two distinct edges with the same label; the literal projection takes
    // both, the traversed-edge projection only one.
    ProgramAutomaton pa;
    pa.vars = {"x"};
    pa.names = {"l0", "l1", "l2", "l3"};
    pa.initial = 0;
    pa.errors = {3};
    Statement inc = parse_statement("x:=x+1");
    Statement guard = parse_statement("assume(x>=2)");
    pa.edges = {{0, inc, 1}, {1, inc, 2}, {2, guard, 3}};
    pa.sort_edges();
    Word w = {inc, inc, guard};
    automata::Run run;
    run.locations = {0, 1, 2, 3};
    run.word = w;

    PathProgram traversed = extract(run, pa);
    CHECK(traversed.automaton.edges.size() == 3);
    ExtractOptions by_label;
    by_label.by_label = true;
    PathProgram literal = extract(run, pa, by_label);
    CHECK(literal.automaton.edges.size() == 3);  // identical here

    // Add an unrelated edge with a repeated label; only by-label picks it up.
    pa.edges.push_back({0, guard, 2});
    pa.sort_edges();
    PathProgram t2 = extract(run, pa);
    PathProgram l2 = extract(run, pa, by_label);
    CHECK(t2.automaton.edges.size() == 3);
    CHECK(l2.automaton.edges.size() == 4);
    CHECK(t2.canonical_key != l2.canonical_key);
}
