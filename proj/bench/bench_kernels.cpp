// Serial reference kernels against their OpenMP counterparts.

#include <cmath>
#include <numbers>

#include <benchmark/benchmark.h>

#include "exittime/pde_oracle.hpp"
#include "exittime/stencil.hpp"
#include "exittime/stochastic.hpp"

using namespace exittime;

namespace {

StencilSystem model_square(int n)
{
    StencilSystem s(n, n);
    double const h = 1.0 / (n - 1);
    for (int j = 1; j < n - 1; ++j)
    {
        for (int i = 1; i < n - 1; ++i)
        {
            std::size_t const p = static_cast<std::size_t>(j) * n + i;
            s.active[p] = 1;
            s.diag[p] = 4;
            s.east[p] = i + 1 < n - 1 ? -1 : 0;
            s.west[p] = i > 1 ? -1 : 0;
            s.north[p] = j + 1 < n - 1 ? -1 : 0;
            s.south[p] = j > 1 ? -1 : 0;
            s.rhs[p] = h * h;
        }
    }
    return s;
}

MCConfig mc_config(int threads)
{
    MCConfig c;
    c.paths = 2000;
    c.dt = 1e-3;
    c.seed = 1;
    c.threads = threads;
    return c;
}

void BM_EulerSerial(benchmark::State& state)
{
    DomainSpec const d = parse_domain("ellipse:a=2,b=1");
    for (auto _ : state)
        benchmark::DoNotOptimize(simulate_exit_serial(d, {0, 0}, mc_config(1)));
    state.SetItemsProcessed(state.iterations() * 2000);
}

void BM_EulerParallel(benchmark::State& state)
{
    DomainSpec const d = parse_domain("ellipse:a=2,b=1");
    for (auto _ : state)
        benchmark::DoNotOptimize(simulate_exit(d, {0, 0}, mc_config(static_cast<int>(state.range(0)))));
    state.SetItemsProcessed(state.iterations() * 2000);
}

void BM_WosHyperbolic(benchmark::State& state)
{
    DomainSpec const d = parse_domain("geodesic-nbhd:alpha=1");
    MCConfig c = mc_config(static_cast<int>(state.range(0)));
    c.method = Method::WoS;
    c.paths = 20000;
    for (auto _ : state)
        benchmark::DoNotOptimize(simulate_exit(d, {1, 0.3, Chart::HalfPlanePolar}, c));
    state.SetItemsProcessed(state.iterations() * 20000);
}

template<bool Parallel>
void BM_Sor(benchmark::State& state)
{
    int const n = static_cast<int>(state.range(0));
    StencilSystem const s = model_square(n);
    IterControl ctl;
    ctl.tol = 1e-8;
    for (auto _ : state)
    {
        std::vector<double> x(s.size(), 0.0);
        auto st = Parallel ? sor_red_black(s, x, model_sor_omega(n, n), ctl)
                           : sor_serial(s, x, model_sor_omega(n, n), ctl);
        benchmark::DoNotOptimize(st);
    }
}

template<bool Parallel>
void BM_Cg(benchmark::State& state)
{
    int const n = static_cast<int>(state.range(0));
    StencilSystem const s = model_square(n);
    IterControl ctl;
    for (auto _ : state)
    {
        std::vector<double> x(s.size(), 0.0);
        auto st = Parallel ? cg_parallel(s, x, ctl) : cg_serial(s, x, ctl);
        benchmark::DoNotOptimize(st);
    }
}

template<bool Parallel>
void BM_GridEllipse(benchmark::State& state)
{
    DomainSpec const d = parse_domain("ellipse:a=2,b=1");
    SolveOptions o;
    o.h = 0.02;
    o.parallel = Parallel;
    o.omega = 0.0;
    for (auto _ : state)
        benchmark::DoNotOptimize(solve_grid(d, o).residual);
}

}  // namespace

BENCHMARK(BM_EulerSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_EulerParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_WosHyperbolic)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Sor<false>)->Arg(129)->Arg(257)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Sor<true>)->Arg(129)->Arg(257)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Cg<false>)->Arg(129)->Arg(257)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Cg<true>)->Arg(129)->Arg(257)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_GridEllipse<false>)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_GridEllipse<true>)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
