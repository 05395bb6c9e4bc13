#include <benchmark/benchmark.h>

#include <random>

#include "larom/burgers.hpp"
#include "larom/linalg.hpp"
#include "larom/mlp.hpp"
#include "larom/rom.hpp"

namespace {

larom::Matrix random_matrix(std::size_t r, std::size_t c, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    larom::Matrix m(r, c);
    for (double& v : m.raw()) v = d(rng);
    return m;
}

void BM_Matmul(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto a = random_matrix(n, n, 1);
    const auto b = random_matrix(n, n, 2);
    for (auto _ : state) {
        auto c = larom::matmul(a, b);
        benchmark::DoNotOptimize(c.data());
    }
}
BENCHMARK(BM_Matmul)->Arg(64)->Arg(256);

void BM_FomSolve(benchmark::State& state) {
    const auto grid = larom::make_grid(128, 200, -3.0, 3.0, 1.0);
    const larom::ParameterVector mu{{0.8, 1.0}, {"a", "w"}};
    for (auto _ : state) {
        auto snap = larom::solve(mu, grid, 0.02);
        benchmark::DoNotOptimize(snap.u.data());
    }
}
BENCHMARK(BM_FomSolve);

void BM_MlpForward(benchmark::State& state) {
    const auto net = larom::init_params({128, 64, 32, 3}, 7);
    const auto x = random_matrix(201, 128, 3);
    for (auto _ : state) {
        auto y = larom::forward(net, x);
        benchmark::DoNotOptimize(y.data());
    }
}
BENCHMARK(BM_MlpForward);

void BM_LatentIntegrate(benchmark::State& state) {
    const larom::SindyLibrary lib{3, false};
    larom::Matrix xi(3, 3);
    xi(0, 0) = -1.0;
    xi(1, 1) = -0.5;
    xi(2, 2) = -0.1;
    const std::vector<double> z0{1.0, 1.0, 1.0};
    for (auto _ : state) {
        auto z = larom::integrate_latent(xi, z0, 200, 0.005, lib);
        benchmark::DoNotOptimize(z.data());
    }
}
BENCHMARK(BM_LatentIntegrate);

}  // namespace

BENCHMARK_MAIN();
