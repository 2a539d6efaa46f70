#include <benchmark/benchmark.h>

#include "impcheck/automata.hpp"
#include "impcheck/cegar.hpp"
#include "impcheck/parser.hpp"

using namespace impcheck;

namespace {

const char* kSource = R"(var x, y;
x := 0;
y := 42;
while (x < 100) {
  x := x + 1;
  while (y <= 0) {
    y := 42;
  }
}
assert(x == 100 && y == 42);
)";

void BM_InclusionEmpty(benchmark::State& state) {
    ProgramAutomaton pa = lower(parse_program(kSource));
    automata::FloydHoareAutomaton empty;
    for (auto _ : state) {
        auto cex = automata::inclusion_counterexample(pa, empty);
        benchmark::DoNotOptimize(cex.has_value());
    }
}

void BM_InclusionAfterUnion(benchmark::State& state) {
    // Measure the subset construction against a grown data automaton.
    ProgramAutomaton pa = lower(parse_program(kSource));
    cegar::Config config;
    config.domain = domains::DomainKind::Interval;
    auto [verdict, stats] = cegar::verify(pa, config);
    for (auto _ : state) {
        auto cex = automata::inclusion_counterexample(pa, stats.data_automaton);
        benchmark::DoNotOptimize(cex.has_value());
    }
}

}  // namespace

BENCHMARK(BM_InclusionEmpty);
BENCHMARK(BM_InclusionAfterUnion);
