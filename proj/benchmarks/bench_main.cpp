#include <benchmark/benchmark.h>

#include <numeric>
#include <random>
#include <vector>

#include "evqc/adversary.hpp"
#include "evqc/engine.hpp"
#include "evqc/meas_structure.hpp"
#include "evqc/states.hpp"
#include "evqc/timedomain.hpp"

namespace {

// Balanced function with a fixed shuffle so runs are comparable.
evqc::BoolFunc balanced(unsigned n) {
    const std::size_t size = std::size_t{1} << n;
    std::vector<std::size_t> idx(size);
    std::iota(idx.begin(), idx.end(), 0);
    std::mt19937_64 rng(11);
    std::shuffle(idx.begin(), idx.end(), rng);
    idx.resize(size / 2);
    return evqc::BoolFunc::from_ones(n, idx);
}

void BM_Expectation(benchmark::State &state) {
    const auto n = static_cast<unsigned>(state.range(0));
    const auto rho = evqc::pulsed_thermal(evqc::default_spin_system(n));
    const auto m = evqc::total_spin(n, evqc::Axis::X);
    const auto f = balanced(n);
    for (auto _ : state) benchmark::DoNotOptimize(evqc::expectation(m, rho, f));
}
BENCHMARK(BM_Expectation)->DenseRange(2, 8, 2)->Unit(benchmark::kMicrosecond);

void BM_SFunctional(benchmark::State &state) {
    const auto n = static_cast<unsigned>(state.range(0));
    const auto b = evqc::b_matrix(evqc::pure_w(n), evqc::w_projector(n));
    const auto f = balanced(n);
    for (auto _ : state) benchmark::DoNotOptimize(evqc::s_functional(b, f));
}
BENCHMARK(BM_SFunctional)->DenseRange(2, 10, 2)->Unit(benchmark::kMicrosecond);

void BM_SearchC(benchmark::State &state) {
    const auto n = static_cast<unsigned>(state.range(0));
    evqc::SearchOptions opt;
    opt.budget = 20000;
    opt.threads = 1;
    for (auto _ : state) benchmark::DoNotOptimize(evqc::search_max_c_ratio(n, opt).ratio);
}
BENCHMARK(BM_SearchC)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond)->Iterations(3);

void BM_Signal(benchmark::State &state) {
    const auto count = static_cast<std::size_t>(state.range(0));
    const auto sys = evqc::default_spin_system(3);
    const auto h = evqc::hamiltonian(sys);
    const auto rho = evqc::pulsed_thermal(sys);
    const auto m = evqc::total_spin(3, evqc::Axis::X);
    for (auto _ : state) {
        const auto trace = evqc::signal(rho, h, m, 1e-4, count);
        benchmark::DoNotOptimize(evqc::spectrum(trace).size());
    }
}
BENCHMARK(BM_Signal)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_Adversary(benchmark::State &state) {
    const auto n = static_cast<unsigned>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(evqc::verify_adversary(n, 200, 1).passed());
}
BENCHMARK(BM_Adversary)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

} // namespace
BENCHMARK_MAIN();
