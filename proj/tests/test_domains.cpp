#include <doctest.h>

#include "helpers.hpp"
#include "impcheck/domains.hpp"
#include "impcheck/linsolve.hpp"

using namespace impcheck;
using namespace testutil;
using namespace impcheck::domains;

namespace {

AbstractState assumed(DomainKind kind, const VarSetPtr& vars, const std::string& bexpr) {
    return post(AbstractState::top(kind, vars),
                Statement::assume(parse_bool_expr(bexpr)));
}

// Random reachable state: a few posts applied to top.
AbstractState random_state(Rng& rng, DomainKind kind, const VarSetPtr& vars) {
    AbstractState s = AbstractState::top(kind, vars);
    int steps = pick(rng, 0, 4);
    for (int i = 0; i < steps; ++i) {
        Statement st = random_statement(rng, *vars);
        AbstractState next = post(s, st);
        if (!next.is_bottom()) s = std::move(next);
    }
    return s;
}

ConcreteState state_of(const std::vector<std::string>& vars, std::vector<long long> vals) {
    ConcreteState s;
    for (size_t i = 0; i < vars.size(); ++i) s[vars[i]] = Int(static_cast<long>(vals[i]));
    return s;
}

}  // namespace

TEST_CASE("lattice ordering basics") {
    auto vars = make_varset({"x", "y"});
    for (DomainKind kind : {DomainKind::Interval, DomainKind::Octagon, DomainKind::Congruence,
                            DomainKind::Comp}) {
        AbstractState bot = AbstractState::bottom(kind, vars);
        AbstractState top = AbstractState::top(kind, vars);
        CHECK(leq(bot, top));
        CHECK(leq(bot, bot));
        CHECK(leq(top, top));
        CHECK_FALSE(leq(top, bot));
    }

    auto vx = make_varset({"x"});
    AbstractState narrow = assumed(DomainKind::Interval, vx, "0<=x&&x<=99");
    AbstractState wide = assumed(DomainKind::Interval, vx, "0<=x&&x<=100");
    CHECK(leq(narrow, wide));
    CHECK_FALSE(leq(wide, narrow));
}

TEST_CASE("congruence divisibility ordering and join") {
    auto vx = make_varset({"x"});
    AbstractState top = AbstractState::top(DomainKind::Congruence, vx);
    // x ≡ 0 (mod 4) built as join of constants 0 and 4.
    AbstractState c0 = post(top, parse_statement("x:=0"));
    AbstractState c4 = post(top, parse_statement("x:=4"));
    AbstractState c2 = post(top, parse_statement("x:=2"));
    AbstractState mod4 = join(c0, c4);
    AbstractState mod2 = join(c0, c2);
    CHECK(leq(mod4, mod2));       // divisibility: 4Z ⊆ 2Z
    CHECK_FALSE(leq(mod2, mod4));
    // (x ≡ 0 mod 4) ⊔ (x ≡ 2 mod 4) = x ≡ 0 mod 2
    AbstractState c6 = post(top, parse_statement("x:=6"));
    AbstractState mod4r2 = join(c2, c6);
    AbstractState joined = join(mod4, mod4r2);
    CHECK(leq(joined, mod2));
    CHECK(leq(mod2, joined));
}

TEST_CASE("join and widen basics") {
    auto vx = make_varset({"x"});
    AbstractState a = assumed(DomainKind::Interval, vx, "x==0");
    AbstractState b = assumed(DomainKind::Interval, vx, "2<=x&&x<=3");
    AbstractState bot = AbstractState::bottom(DomainKind::Interval, vx);
    CHECK(join(a, bot) == a);
    AbstractState j = join(a, b);
    AbstractState expect = assumed(DomainKind::Interval, vx, "0<=x&&x<=3");
    CHECK(j == expect);

    AbstractState w = widen(a, join(a, assumed(DomainKind::Interval, vx, "0<=x&&x<=1")));
    Predicate wp = to_predicate(w);
    CHECK(linsolve::entails(wp, Predicate::from_bool_expr(parse_bool_expr("x>=0"))) ==
          linsolve::Tri::True);
    CHECK(linsolve::entails(wp, Predicate::from_bool_expr(parse_bool_expr("x<=1000000"))) ==
          linsolve::Tri::False);

    CHECK(widen(a, a) == a);
}

TEST_CASE("octagon widening drops unstable relations") {
    auto vars = make_varset({"x", "y"});
    AbstractState a = assumed(DomainKind::Octagon, vars, "x-y<=0&&y-x<=0");
    AbstractState b = assumed(DomainKind::Octagon, vars, "x-y<=1&&y-x<=0");
    AbstractState w = widen(a, join(a, b));
    // x - y is unbounded above now, y - x still bounded.
    ConcreteState far = state_of({"x", "y"}, {1000000, 0});
    CHECK(to_predicate(w).holds(far));
    ConcreteState wrong = state_of({"x", "y"}, {0, 5});
    CHECK_FALSE(to_predicate(w).holds(wrong));
}

TEST_CASE("post matches the paper's interval steps") {
    auto vars = make_varset({"x", "y"});
    AbstractState s = post(AbstractState::top(DomainKind::Interval, vars),
                           parse_statement("x:=0;y:=42"));
    Predicate p = to_predicate(s);
    CHECK(p.holds(state_of({"x", "y"}, {0, 42})));
    CHECK_FALSE(p.holds(state_of({"x", "y"}, {1, 42})));
    CHECK_FALSE(p.holds(state_of({"x", "y"}, {0, 41})));

    AbstractState range = assumed(DomainKind::Interval, vars, "0<=x&&x<=100&&y==42");
    AbstractState guarded = post(range, parse_statement("assume(x<100)"));
    Predicate gp = to_predicate(guarded);
    CHECK(gp.holds(state_of({"x", "y"}, {99, 42})));
    CHECK_FALSE(gp.holds(state_of({"x", "y"}, {100, 42})));
}

TEST_CASE("octagon post shifts difference bounds exactly") {
    auto vars = make_varset({"x", "y"});
    AbstractState s = assumed(DomainKind::Octagon, vars, "x-y<=0");
    AbstractState t = post(s, parse_statement("x:=x+1"));
    Predicate p = to_predicate(t);
    CHECK(p.holds(state_of({"x", "y"}, {5, 4})));    // x-y == 1
    CHECK_FALSE(p.holds(state_of({"x", "y"}, {6, 4})));
    // Cross-check on random concrete states.
    Rng rng(13001);
    for (int i = 0; i < 50; ++i) {
        long long y = pick(rng, -20, 20);
        long long x = y - pick(rng, 0, 15);
        ConcreteState pre = state_of({"x", "y"}, {x, y});
        REQUIRE(to_predicate(s).holds(pre));
        auto succ = step(parse_statement("x:=x+1"), pre);
        REQUIRE(succ.size() == 1);
        CHECK(p.holds(succ[0]));
    }
}

TEST_CASE("assume splits disjunctions and joins the branches") {
    auto vars = make_varset({"x", "y"});
    AbstractState s = assumed(DomainKind::Interval, vars, "x==100&&y==42");
    AbstractState t = post(s, parse_statement("assume(x!=100||y!=42)"));
    CHECK(t.is_bottom());

    AbstractState u = assumed(DomainKind::Interval, vars, "100<=x&&y==42");
    AbstractState v = post(u, parse_statement("assume(x!=100||y!=42)"));
    CHECK_FALSE(v.is_bottom());
    CHECK(to_predicate(v).holds(state_of({"x", "y"}, {101, 42})));
}

TEST_CASE("to_predicate on designated values") {
    auto vars = make_varset({"x", "y"});
    CHECK(to_predicate(AbstractState::bottom(DomainKind::Comp, vars)).is_false());
    CHECK(to_predicate(AbstractState::top(DomainKind::Comp, vars)).is_true());

    AbstractState s = assumed(DomainKind::Interval, vars, "0<=x&&x<=100&&y==42");
    Predicate p = to_predicate(s);
    Predicate expect = Predicate::from_bool_expr(parse_bool_expr("0<=x&&x<=100&&y==42"));
    CHECK(linsolve::entails(p, expect) == linsolve::Tri::True);
    CHECK(linsolve::entails(expect, p) == linsolve::Tri::True);
}

TEST_CASE("from_predicate is exact or refuses") {
    auto vars = make_varset({"x", "y"});
    Predicate good = Predicate::from_bool_expr(parse_bool_expr("0<=x&&x<=100&&y==42"));
    auto s = from_predicate(DomainKind::Interval, vars, good);
    REQUIRE(s.has_value());
    CHECK(linsolve::entails(to_predicate(*s), good) == linsolve::Tri::True);
    CHECK(linsolve::entails(good, to_predicate(*s)) == linsolve::Tri::True);

    Predicate rel = Predicate::from_bool_expr(parse_bool_expr("x-y<=3"));
    CHECK_FALSE(from_predicate(DomainKind::Interval, vars, rel).has_value());
    CHECK(from_predicate(DomainKind::Octagon, vars, rel).has_value());
    Predicate three = Predicate::from_bool_expr(parse_bool_expr("x+y-3<=x-y"));
    CHECK(from_predicate(DomainKind::Octagon, vars, three).has_value());  // 2y <= 3 -> y <= 1
    Predicate disj = Predicate::from_bool_expr(parse_bool_expr("x==0||x==1"));
    CHECK_FALSE(from_predicate(DomainKind::Interval, vars, disj).has_value());
}

TEST_CASE("product reduction propagates bottom and constants") {
    auto vars = make_varset({"x"});
    AbstractState top = AbstractState::top(DomainKind::Comp, vars);
    AbstractState c0 = post(top, parse_statement("x:=0"));
    AbstractState c2 = post(top, parse_statement("x:=2"));
    AbstractState even = join(c0, c2);  // congruence: x ≡ 0 (2); octagon: 0 <= x <= 2
    AbstractState odd3 = post(even, parse_statement("assume(x==1)"));
    CHECK(odd3.is_bottom());

    // Congruence snapping tightens octagon bounds: x in [1,3] and x even
    // leaves exactly {2}.
    AbstractState ranged = post(even, parse_statement("assume(x>=1)"));
    Predicate p = to_predicate(ranged);
    CHECK(p.holds(ConcreteState{{"x", 2}}));
    CHECK_FALSE(p.holds(ConcreteState{{"x", 1}}));
    CHECK_FALSE(p.holds(ConcreteState{{"x", 3}}));
}

TEST_CASE("non-bottom states have satisfiable predicates") {
    Rng rng(13002);
    auto vars = make_varset({"x", "y"});
    for (DomainKind kind : {DomainKind::Interval, DomainKind::Octagon, DomainKind::Congruence,
                            DomainKind::Comp}) {
        for (int i = 0; i < 25; ++i) {
            AbstractState s = random_state(rng, kind, vars);
            Predicate p = to_predicate(s);
            if (s.is_bottom()) {
                CHECK(p.is_false());
            } else {
                CHECK(linsolve::check_sat(p).kind != linsolve::SatKind::Unsat);
            }
        }
    }
}

TEST_CASE("join is an upper bound and widen dominates join") {
    Rng rng(13003);
    auto vars = make_varset({"x", "y"});
    for (DomainKind kind : {DomainKind::Interval, DomainKind::Octagon, DomainKind::Congruence,
                            DomainKind::Comp}) {
        for (int i = 0; i < 20; ++i) {
            AbstractState a = random_state(rng, kind, vars);
            AbstractState b = random_state(rng, kind, vars);
            AbstractState j = join(a, b);
            CHECK(leq(a, j));
            CHECK(leq(b, j));
            AbstractState w = widen(a, j);
            CHECK(leq(j, w));
        }
    }
}

TEST_CASE("widening stabilizes within the chain bound") {
    Rng rng(13004);
    auto vars = make_varset({"x", "y"});
    for (DomainKind kind : {DomainKind::Interval, DomainKind::Octagon}) {
        long bound = kind == DomainKind::Interval ? 2 * 2 + 2 : (2 * 2) * (2 * 2) + 1;
        for (int round = 0; round < 10; ++round) {
            AbstractState acc = random_state(rng, kind, vars);
            long steps = 0;
            for (;;) {
                AbstractState next = random_state(rng, kind, vars);
                AbstractState grown = join(acc, next);
                if (leq(grown, acc)) break;
                acc = widen(acc, grown);
                ++steps;
                if (steps > bound) break;
            }
            CHECK(steps <= bound);
        }
    }
}

TEST_CASE("octagon closure is idempotent and sound") {
    Rng rng(13005);
    auto vars = make_varset({"x", "y", "z"});
    for (int i = 0; i < 30; ++i) {
        AbstractState s = random_state(rng, DomainKind::Octagon, vars);
        REQUIRE(s.oct.has_value());
        OctagonState once = *s.oct;
        once.close();
        OctagonState twice = once;
        twice.closed = false;
        twice.close();
        CHECK(once.bottom == twice.bottom);
        if (!once.bottom) {
            for (size_t k = 0; k < once.d.size(); ++k) CHECK(once.d[k] == twice.d[k]);
        }
        // Closure preserves the concretization on sample points.
        if (!s.is_bottom()) {
            Predicate before = to_predicate(s);
            AbstractState closed_copy = s;
            closed_copy.oct->close();
            Predicate after = to_predicate(closed_copy);
            auto model = brute_model(before, {"x", "y", "z"}, -8, 8);
            if (model)
                CHECK(after.holds(state_of({"x", "y", "z"}, *model)));
        }
    }
}

TEST_CASE("abstract post is sound on random probes") {
    Rng rng(13006);
    std::vector<std::string> names{"x", "y"};
    auto vars = make_varset(names);
    for (DomainKind kind : {DomainKind::Interval, DomainKind::Octagon, DomainKind::Congruence,
                            DomainKind::Comp}) {
        int probes = 0;
        while (probes < 250) {
            AbstractState a = random_state(rng, kind, vars);
            if (a.is_bottom()) continue;
            auto model = linsolve::check_sat(to_predicate(a));
            if (model.kind != linsolve::SatKind::Sat) continue;
            ConcreteState sigma = model.model;
            for (const auto& v : names) sigma.emplace(v, 0);
            Statement st = random_statement(rng, names, /*allow_havoc=*/true);
            AbstractState image = post(a, st);
            std::optional<Box> box;
            if (st.contains_havoc()) box = Box{-6, 6};
            std::vector<ConcreteState> succ;
            if (st.kind() == Statement::Kind::Seq && st.contains_havoc()) continue;
            succ = step(st, sigma, box);
            Predicate ip = to_predicate(image);
            for (const auto& out : succ) {
                ++probes;
                CHECK(ip.holds(out));
            }
            if (succ.empty()) ++probes;
        }
    }
}
