#include <benchmark/benchmark.h>

#include <random>

#include "solarfc/clustering.hpp"
#include "solarfc/gpr.hpp"

namespace {

Eigen::MatrixXd random_points(int n, int q, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> norm;
    Eigen::MatrixXd X(n, q);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < q; ++j) X(i, j) = norm(rng);
    return X;
}

void BM_KernelMatrix(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto X = random_points(n, 7, 1);
    solarfc::KernelHyperparams hp;
    for (auto _ : state) {
        auto K = solarfc::build_kernel_matrix(X, hp);
        benchmark::DoNotOptimize(K.data());
    }
    state.SetComplexityN(n);
}
BENCHMARK(BM_KernelMatrix)->Range(64, 1024)->Complexity();

void BM_CholeskySolve(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto X = random_points(n, 7, 2);
    solarfc::KernelHyperparams hp;
    auto K = solarfc::build_kernel_matrix(X, hp);
    K.diagonal().array() += 0.01;
    for (auto _ : state) {
        auto llt = solarfc::chol_with_jitter(K);
        benchmark::DoNotOptimize(llt.matrixLLT().data());
    }
    state.SetComplexityN(n);
}
BENCHMARK(BM_CholeskySolve)->Range(64, 1024)->Complexity();

void BM_LogMarginalLikelihood(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto X = random_points(n, 7, 3);
    Eigen::VectorXd y = X.col(0).array().sin();
    solarfc::KernelHyperparams hp;
    for (auto _ : state) {
        benchmark::DoNotOptimize(solarfc::log_marginal_likelihood(X, y, hp));
    }
}
BENCHMARK(BM_LogMarginalLikelihood)->Range(64, 512);

void BM_KMeans(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    std::mt19937 rng(4);
    std::uniform_real_distribution<double> uh(0, 23), up(0, 30);
    std::vector<solarfc::ClusterPoint> pts(n);
    for (auto& p : pts) p = {uh(rng), up(rng), 1 + static_cast<int>(rng() % 365)};
    solarfc::ClusterConfig cfg;
    cfg.n_restarts = 5;
    for (auto _ : state) {
        auto m = solarfc::fit_kmeans(pts, cfg);
        benchmark::DoNotOptimize(m.inertia_standard);
    }
}
BENCHMARK(BM_KMeans)->Range(256, 8192);

}  // namespace

BENCHMARK_MAIN();
