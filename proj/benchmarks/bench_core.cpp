#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include "xsc/cluster.hpp"
#include "xsc/extremal.hpp"
#include "xsc/graph.hpp"
#include "xsc/numerics.hpp"
#include "xsc/variates.hpp"

namespace {

using namespace xsc;

Eigen::MatrixXd random_symmetric(int n, std::uint64_t seed) {
    RandomStream s(seed);
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) {
            const double v = 2.0 * s.next_open01() - 1.0;
            m(i, j) = v;
            m(j, i) = v;
        }
    return m;
}

ExtremalSample demo_extremes(std::size_t count, std::uint64_t seed) {
    FactorModelSpec spec;
    spec.loadings = Eigen::MatrixXd(4, 2);
    spec.loadings << 0.1, 0.9, 0.2, 0.8, 0.3, 0.7, 0.4, 0.6;
    RandomStream s(seed);
    const SampleMatrix sample = simulate_lfm(spec, count * 60, s);
    return select_extremes(sample, SelectionRule::top_count(count));
}

void BM_sym_eigen(benchmark::State& state) {
    const Eigen::MatrixXd m = random_symmetric(static_cast<int>(state.range(0)), 1);
    for (auto _ : state) benchmark::DoNotOptimize(sym_eigen(m));
}
BENCHMARK(BM_sym_eigen)->Arg(100)->Arg(400)->Arg(800)->Unit(benchmark::kMillisecond);

void BM_sym_eigen_jacobi(benchmark::State& state) {
    const Eigen::MatrixXd m = random_symmetric(static_cast<int>(state.range(0)), 1);
    for (auto _ : state) benchmark::DoNotOptimize(sym_eigen_jacobi(m));
}
BENCHMARK(BM_sym_eigen_jacobi)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_knn_graph(benchmark::State& state) {
    const ExtremalSample e = demo_extremes(static_cast<std::size_t>(state.range(0)), 2);
    for (auto _ : state) {
        const EdgeSet edges = knn_edges(e.angles, 15, EdgeRule::knn_mutual);
        benchmark::DoNotOptimize(kernel_weights(e.angles, edges, 1.0));
    }
}
BENCHMARK(BM_knn_graph)->Arg(400)->Arg(800)->Unit(benchmark::kMillisecond);

void BM_spectral_cluster(benchmark::State& state) {
    const ExtremalSample e = demo_extremes(static_cast<std::size_t>(state.range(0)), 3);
    ClusterOptions opts;
    opts.mode = EdgeRule::knn_mutual;
    const std::size_t k = default_neighbor_count(e.count(), 5.0);
    for (auto _ : state) {
        RandomStream s(4);
        benchmark::DoNotOptimize(spectral_cluster(e, 2, k, s, opts));
    }
}
BENCHMARK(BM_spectral_cluster)->Arg(200)->Arg(400)->Arg(800)->Unit(benchmark::kMillisecond);

void BM_simulate_lfm(benchmark::State& state) {
    FactorModelSpec spec;
    spec.loadings = Eigen::MatrixXd(4, 2);
    spec.loadings << 0.1, 0.9, 0.2, 0.8, 0.3, 0.7, 0.4, 0.6;
    const auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        RandomStream s(5);
        benchmark::DoNotOptimize(simulate_lfm(spec, n, s));
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(n));
}
BENCHMARK(BM_simulate_lfm)->Arg(25000)->Arg(125000)->Unit(benchmark::kMillisecond);

void BM_sample_sym_stable(benchmark::State& state) {
    for (auto _ : state) {
        RandomStream s(6);
        benchmark::DoNotOptimize(sample_sym_stable(s, 1.8, 100000));
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * 100000);
}
BENCHMARK(BM_sample_sym_stable)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
