#include <benchmark/benchmark.h>

#include "impcheck/cegar.hpp"
#include "impcheck/parser.hpp"

using namespace impcheck;

namespace {

const char* kNested = R"(var x, y;
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

const char* kRelational = R"(var x, y, n;
havoc n;
x := 0;
y := 0;
while (x < n) {
  x := x + 1;
  y := y + 1;
}
assert(y == x);
)";

void BM_VerifyNestedInterval(benchmark::State& state) {
    ProgramAutomaton pa = lower(parse_program(kNested));
    cegar::Config config;
    config.domain = domains::DomainKind::Interval;
    for (auto _ : state) {
        auto r = cegar::verify(pa, config);
        benchmark::DoNotOptimize(r.first.kind);
    }
}

void BM_VerifyRelationalOctagon(benchmark::State& state) {
    ProgramAutomaton pa = lower(parse_program(kRelational));
    cegar::Config config;
    config.domain = domains::DomainKind::Octagon;
    for (auto _ : state) {
        auto r = cegar::verify(pa, config);
        benchmark::DoNotOptimize(r.first.kind);
    }
}

}  // namespace

BENCHMARK(BM_VerifyNestedInterval);
BENCHMARK(BM_VerifyRelationalOctagon);
