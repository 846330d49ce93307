#include <benchmark/benchmark.h>

#include "hygrid/network.hpp"

using namespace hygrid;

namespace {

void BM_forward_sweep(benchmark::State& state) {
    int H = static_cast<int>(state.range(0));
    net::Network n = net::builtin_ieee33();
    int nb = n.num_buses();
    double tot = n.total_p_load_kw();
    std::vector<std::vector<double>> p(H, std::vector<double>(nb)),
        q(H, std::vector<double>(nb));
    for (int h = 0; h < H; ++h)
        for (int b = 0; b < nb; ++b) {
            p[h][b] = -2.5 * n.buses[b].p_load_kw / tot;
            q[h][b] = -2.5 * n.buses[b].q_load_kvar / tot;
        }
    for (auto _ : state) {
        net::VoltageProfile vp = net::verify_voltages(n, p, q);
        benchmark::DoNotOptimize(vp.min_v);
    }
}

void BM_parse_builtin(benchmark::State& state) {
    for (auto _ : state) {
        net::Network n = net::builtin_ieee33();
        benchmark::DoNotOptimize(n.num_buses());
    }
}

}  // namespace

BENCHMARK(BM_forward_sweep)->Arg(24)->Arg(336);
BENCHMARK(BM_parse_builtin);
