#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "ddgeo/planner.hpp"
#include "ddgeo/smooth.hpp"

using namespace ddgeo;

namespace {

std::vector<std::pair<Configuration, Configuration>> instances(int count) {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> ang(-kPi, kPi);
    std::uniform_real_distribution<double> dist(1.0, 6.0);
    std::vector<std::pair<Configuration, Configuration>> out;
    for (int i = 0; i < count; ++i) {
        const Point2 v = dist(rng) * unit_from_angle(ang(rng));
        out.emplace_back(Configuration::from_angle({0, 0}, ang(rng)), Configuration::from_angle(v, ang(rng)));
    }
    return out;
}

void plan_batch(benchmark::State& state, bool parallel) {
    const int n = static_cast<int>(state.range(0));
    const Params p = Params::from_sides(n, 2.0 * std::sin(kPi / n));
    const auto cases = instances(4);
    PlannerOptions opt;
    opt.parallel = parallel;
    for (auto _ : state) {
        for (const auto& [u, v] : cases) benchmark::DoNotOptimize(plan(u, v, p, opt).length);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cases.size()));
}

void BM_PlanSerial(benchmark::State& state) { plan_batch(state, false); }
void BM_PlanParallel(benchmark::State& state) { plan_batch(state, true); }

void BM_Oracle(benchmark::State& state) {
    const Params p = Params::from_sides(8, 1.0);
    const auto cases = instances(1);
    OracleOptions oo;
    oo.restarts = static_cast<int>(state.range(0));
    oo.iterations = 2000;
    for (auto _ : state) benchmark::DoNotOptimize(oracle_search(cases[0].first, cases[0].second, p, oo).length);
}

}  // namespace

BENCHMARK(BM_PlanSerial)->Arg(8)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PlanParallel)->Arg(8)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Oracle)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
