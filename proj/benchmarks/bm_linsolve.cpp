#include <benchmark/benchmark.h>

#include "impcheck/linsolve.hpp"
#include "impcheck/parser.hpp"

using namespace impcheck;

namespace {

Predicate pred(const char* b) { return Predicate::from_bool_expr(parse_bool_expr(b)); }

void BM_CheckSatChain(benchmark::State& state) {
    Predicate p = pred("x==0&&y==42&&x<=z&&z<=x+5&&y-z>=30");
    for (auto _ : state) {
        auto r = linsolve::check_sat(p);
        benchmark::DoNotOptimize(r.kind);
    }
}

void BM_CheckSatUnsat(benchmark::State& state) {
    Predicate p = pred("x+y==10&&x-y==3&&z>=0");
    for (auto _ : state) {
        auto r = linsolve::check_sat(p);
        benchmark::DoNotOptimize(r.kind);
    }
}

void BM_Entails(benchmark::State& state) {
    Predicate p = pred("0<=x&&x<=100&&y==42");
    Predicate q = pred("x<=100&&y>=0");
    for (auto _ : state) {
        auto r = linsolve::entails(p, q);
        benchmark::DoNotOptimize(r);
    }
}

}  // namespace

BENCHMARK(BM_CheckSatChain);
BENCHMARK(BM_CheckSatUnsat);
BENCHMARK(BM_Entails);
