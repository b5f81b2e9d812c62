#include <benchmark/benchmark.h>

#include <cmath>

#include "bikelab/dynamics.hpp"
#include "bikelab/geometry.hpp"
#include "bikelab/rng.hpp"
#include "bikelab/symplectic.hpp"
#include "bikelab/triangle.hpp"

namespace {

using namespace bikelab;

Polygon make_polygon(int n) {
    Rng rng(42);
    for (;;) {
        std::vector<Point2> v;
        for (int i = 0; i < n; ++i) v.push_back(rng.point(-1.0, 1.0));
        Polygon p(std::move(v));
        if (p.min_side() > 0.15 * p.diameter()) return p;
    }
}

void BM_map_one_sided(benchmark::State& state) {
    const Polygon p = make_polygon(static_cast<int>(state.range(0)));
    const FrameLength t{0.1 * p.min_side()};
    for (auto _ : state) {
        benchmark::DoNotOptimize(map_one_sided(p, t, Side::Forward));
    }
}
BENCHMARK(BM_map_one_sided)->Arg(5)->Arg(9);

void BM_inverse_one_sided(benchmark::State& state) {
    ToleranceConfig cfg;
    const Polygon p = make_polygon(static_cast<int>(state.range(0)));
    const FrameLength t{0.1 * p.min_side()};
    const Polygon q = map_one_sided(p, t, Side::Forward);
    for (auto _ : state) {
        benchmark::DoNotOptimize(inverse_one_sided(q, t, Side::Forward, cfg));
    }
}
BENCHMARK(BM_inverse_one_sided)->Arg(5)->Arg(9);

void BM_map_f(benchmark::State& state) {
    ToleranceConfig cfg;
    const Polygon p = make_polygon(static_cast<int>(state.range(0)));
    const FrameLength t{0.1 * p.min_side()};
    for (auto _ : state) {
        benchmark::DoNotOptimize(map_f(p, t, 1, cfg));
    }
}
BENCHMARK(BM_map_f)->Arg(5)->Arg(9);

void BM_multi_area(benchmark::State& state) {
    const Polygon p = make_polygon(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(multi_area(p));
    }
}
BENCHMARK(BM_multi_area)->Arg(9)->Arg(21);

void BM_omega_eval(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    Rng rng(7);
    Vec u(static_cast<std::size_t>(2 * n)), v(static_cast<std::size_t>(2 * n));
    for (double& c : u) c = rng.uniform(-1.0, 1.0);
    for (double& c : v) c = rng.uniform(-1.0, 1.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(omega_eval(n, u, v));
    }
}
BENCHMARK(BM_omega_eval)->Arg(7)->Arg(11);

void BM_domain_membership(benchmark::State& state) {
    ToleranceConfig cfg;
    const TriangleShape s({1.0, 1.1, M_PI - 2.1});
    for (auto _ : state) {
        benchmark::DoNotOptimize(domain_membership(s, 0.4, 50, cfg));
    }
}
BENCHMARK(BM_domain_membership);

void BM_flow_xi_step(benchmark::State& state) {
    ToleranceConfig cfg;
    cfg.ode_step = 1e-3;
    const Polygon tri = make_polygon(3);
    for (auto _ : state) {
        benchmark::DoNotOptimize(flow_xi(tri, 0.1, cfg));
    }
}
BENCHMARK(BM_flow_xi_step);

}  // namespace

BENCHMARK_MAIN();
