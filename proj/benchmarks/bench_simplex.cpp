#include <benchmark/benchmark.h>

#include <random>

#include "hygrid/lp.hpp"

using namespace hygrid;

namespace {

// dense random LP with a guaranteed interior point, n vars x m rows
lp::Problem random_lp(int n, int m, uint32_t seed) {
    std::mt19937 rng(seed);
    auto unit = [&] { return (rng() >> 8) * (1.0 / 16777216.0); };
    lp::Problem p;
    std::vector<lp::VarHandle> v;
    std::vector<double> x0(n);
    for (int j = 0; j < n; ++j) {
        x0[j] = unit() * 10.0;
        v.push_back(p.add_var(0.0, 20.0, unit() * 2.0 - 1.0));
    }
    for (int i = 0; i < m; ++i) {
        std::vector<std::pair<lp::VarHandle, double>> terms;
        double lhs = 0;
        for (int j = 0; j < n; ++j) {
            double a = unit() * 2.0 - 1.0;
            terms.emplace_back(v[j], a);
            lhs += a * x0[j];
        }
        p.add_constraint(terms, lp::Sense::le, lhs + unit() * 5.0);
    }
    return p;
}

void BM_simplex_dense(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    lp::Problem p = random_lp(n, n, 7);
    for (auto _ : state) {
        lp::Solution s = lp::solve_lp(p);
        benchmark::DoNotOptimize(s.objective);
    }
}

}  // namespace

BENCHMARK(BM_simplex_dense)->Arg(20)->Arg(50)->Arg(100);

BENCHMARK_MAIN();
