#include <benchmark/benchmark.h>

#include <random>

#include "impcheck/domains.hpp"

using namespace impcheck;
using namespace impcheck::domains;

namespace {

OctagonState random_octagon(std::mt19937& rng, int n, int constraints) {
    OctagonState s = OctagonState::top(n);
    std::uniform_int_distribution<int> var(0, n - 1), form(0, 1), bound(-40, 40);
    for (int i = 0; i < constraints; ++i) {
        int a = 2 * var(rng) + form(rng);
        int b = 2 * var(rng) + form(rng);
        if (a == b) continue;
        s.set_upper(a, b, bound(rng));
    }
    return s;
}

void BM_OctagonClosure(benchmark::State& state) {
    std::mt19937 rng(42);
    int n = static_cast<int>(state.range(0));
    std::vector<OctagonState> inputs;
    for (int i = 0; i < 64; ++i) inputs.push_back(random_octagon(rng, n, 3 * n));
    size_t idx = 0;
    for (auto _ : state) {
        OctagonState copy = inputs[idx++ % inputs.size()];
        copy.close();
        benchmark::DoNotOptimize(copy.bottom);
    }
}

void BM_OctagonJoin(benchmark::State& state) {
    std::mt19937 rng(43);
    int n = static_cast<int>(state.range(0));
    OctagonState a = random_octagon(rng, n, 3 * n);
    OctagonState b = random_octagon(rng, n, 3 * n);
    for (auto _ : state) {
        OctagonState j = a.join(b);
        benchmark::DoNotOptimize(j.bottom);
    }
}

}  // namespace

BENCHMARK(BM_OctagonClosure)->Arg(2)->Arg(4)->Arg(8);
BENCHMARK(BM_OctagonJoin)->Arg(2)->Arg(4)->Arg(8);
