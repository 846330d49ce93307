#include <benchmark/benchmark.h>

#include "hygrid/optimizer.hpp"

using namespace hygrid;

namespace {

void BM_build_problem(benchmark::State& state) {
    int horizon = static_cast<int>(state.range(0));
    net::Network n = net::builtin_ieee33();
    opt::CaseConfig cfg = opt::CaseConfig::for_case("6a");
    cfg.horizon = horizon;
    opt::AssetSet a = opt::default_assets(cfg);
    profiles::ProfileSet prof = profiles::gen_profiles(1, cfg.pv_penetration, horizon);
    for (auto _ : state) {
        lp::Problem p = opt::build_problem(cfg, n, a, prof);
        benchmark::DoNotOptimize(p.num_rows());
    }
}

void BM_solve_case(benchmark::State& state) {
    int horizon = static_cast<int>(state.range(0));
    net::Network n = net::builtin_ieee33();
    opt::CaseConfig cfg = opt::CaseConfig::for_case("3");
    cfg.horizon = horizon;
    opt::AssetSet a = opt::default_assets(cfg);
    profiles::ProfileSet prof = profiles::gen_profiles(1, cfg.pv_penetration, horizon);
    for (auto _ : state) {
        opt::CaseRun run = opt::run_case(cfg, n, a, prof);
        benchmark::DoNotOptimize(run.solution.objective);
    }
}

}  // namespace

BENCHMARK(BM_build_problem)->Arg(24)->Arg(168)->Arg(336)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_solve_case)->Arg(24)->Arg(72)->Unit(benchmark::kMillisecond);
