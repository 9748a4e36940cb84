#include <slnoise/slnoise.hpp>

#include <benchmark/benchmark.h>

namespace {

const sln::BathParams kBath{1.0, 25.0};

const sln::TimeGrid& grid_10() {
    static const sln::TimeGrid g = sln::TimeGrid::make(0.005, 10.0);
    return g;
}

const sln::KernelTable& table_10() {
    static const sln::KernelTable t = sln::build_kernel_table(grid_10().frequency_grid(), kBath);
    return t;
}

void BM_KernelTable(benchmark::State& state) {
    const auto grid = sln::FrequencyGrid::make(static_cast<std::size_t>(state.range(0)), 0.005);
    for (auto _ : state) benchmark::DoNotOptimize(sln::build_kernel_table(grid, kBath));
}
BENCHMARK(BM_KernelTable)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);

void BM_Filters(benchmark::State& state) {
    const auto scheme = static_cast<sln::SchemeId>(state.range(0));
    state.SetLabel(std::string(sln::to_string(scheme)));
    (void)table_10(); // built once, outside the timed loop
    for (auto _ : state) benchmark::DoNotOptimize(sln::make_filters(scheme, table_10(), 0.01));
}
BENCHMARK(BM_Filters)->DenseRange(0, 6)->Unit(benchmark::kMicrosecond);

void BM_Synthesize(benchmark::State& state) {
    const auto fs = sln::make_filters(sln::SchemeId::EtaNuOptimised, table_10(), 0.01);
    std::uint64_t seed = 0;
    for (auto _ : state) benchmark::DoNotOptimize(sln::synthesize(fs, grid_10(), seed++, 0.5));
}
BENCHMARK(BM_Synthesize)->Unit(benchmark::kMicrosecond);

void BM_Integrate(benchmark::State& state) {
    const auto fs = sln::make_filters(sln::SchemeId::EtaNuOptimised, table_10(), 0.01);
    const auto noise = sln::synthesize(fs, grid_10(), 1);
    sln::SystemModel model;
    model.epsilon = sln::Drive::constant(-1.0);
    for (auto _ : state) benchmark::DoNotOptimize(sln::integrate_trajectory(model, noise));
}
BENCHMARK(BM_Integrate)->Unit(benchmark::kMicrosecond);

void BM_Ensemble(benchmark::State& state) {
    sln::RunConfig cfg;
    cfg.bath = kBath;
    cfg.model.epsilon = sln::Drive::constant(-1.0);
    cfg.t_max = 5.0;
    cfg.n_realizations = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(sln::run_ensemble(cfg));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Ensemble)->Arg(256)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
