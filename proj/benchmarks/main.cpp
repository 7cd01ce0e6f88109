// Microbenchmarks for the hot paths: basis evaluation, 9x9 rotation
// synthesis/composition, frame projection, and the normal-equation CG solve.

#include <cmath>
#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "framefield/field3d.hpp"
#include "framefield/lsq.hpp"
#include "framefield/sh.hpp"

namespace {

framefield::Vec3 random_unit(std::mt19937_64& rng) {
    std::normal_distribution<double> gauss;
    framefield::Vec3 p{gauss(rng), gauss(rng), gauss(rng)};
    return framefield::normalized(p);
}

void BM_sh_basis_eval(benchmark::State& state) {
    std::mt19937_64 rng(7);
    framefield::Vec3 p = random_unit(rng);
    for (auto _ : state) benchmark::DoNotOptimize(framefield::sh_basis_eval(p));
}
BENCHMARK(BM_sh_basis_eval);

void BM_rot9_from_rot3(benchmark::State& state) {
    framefield::Mat3 r = framefield::rot3_from_euler(0.3, 0.7, -0.2);
    for (auto _ : state) benchmark::DoNotOptimize(framefield::rot9_from_rot3(r));
}
BENCHMARK(BM_rot9_from_rot3);

void BM_rot9_compose(benchmark::State& state) {
    framefield::Matrix9 a = framefield::rot_9_from_euler(0.3, 0.7, -0.2);
    framefield::Matrix9 b = framefield::rot_9_from_euler(-0.5, 0.1, 0.9);
    for (auto _ : state) benchmark::DoNotOptimize(framefield::mul(a, b));
}
BENCHMARK(BM_rot9_compose);

void BM_closest_frame(benchmark::State& state) {
    framefield::Matrix9 rb = framefield::rot_9_from_euler(0.4, -0.3, 0.8);
    framefield::RepVector9 q = framefield::mul(rb, framefield::reference_coeffs());
    q[2] += 0.05; // push q slightly off the feasible set
    for (auto _ : state) benchmark::DoNotOptimize(framefield::closest_frame(q));
}
BENCHMARK(BM_closest_frame);

void BM_cg_grid_solve(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    // 2D smoothing system on an n x n grid graph with the border locked.
    for (auto _ : state) {
        framefield::LsqSystem sys(2 * n * n);
        auto id = [n](int i, int j) { return i + n * j; };
        for (int j = 0; j < n; j++)
            for (int i = 0; i < n; i++) {
                if (i + 1 < n)
                    for (int d = 0; d < 2; d++)
                        sys.add_row({{2 * id(i, j) + d, 1.0}, {2 * id(i + 1, j) + d, -1.0}}, 0.0);
                if (j + 1 < n)
                    for (int d = 0; d < 2; d++)
                        sys.add_row({{2 * id(i, j) + d, 1.0}, {2 * id(i, j + 1) + d, -1.0}}, 0.0);
                if (i == 0 || j == 0 || i == n - 1 || j == n - 1) {
                    sys.add_row({{2 * id(i, j), 100.0}}, 100.0);
                    sys.add_row({{2 * id(i, j) + 1, 100.0}}, 0.0);
                }
            }
        benchmark::DoNotOptimize(sys.solve());
    }
}
BENCHMARK(BM_cg_grid_solve)->Arg(16)->Arg(48);

} // namespace

BENCHMARK_MAIN();
