#include <doctest.h>

#include <Eigen/Dense>

#include "xsc/cluster.hpp"
#include "xsc/experiments.hpp"

using namespace xsc;

namespace {
BenchConfig small_config() {
    BenchConfig cfg;
    cfg.loadings = Eigen::MatrixXd(4, 2);
    cfg.loadings << 0.1, 0.9, 0.2, 0.8, 0.3, 0.7, 0.4, 0.6;
    cfg.sample_sizes = {2000, 5000};
    cfg.extreme_counts = {80, 150};
    cfg.taus = {3, 5};
    cfg.replications = 3;
    cfg.seed = 77;
    return cfg;
}
} // namespace

TEST_CASE("benchmark rows: canonical order, full grid, both methods") {
    const auto rows = run_benchmark(small_config());
    CHECK(rows.size() == 2 * 2 * 1 * 3 * 2); // ladder x taus x sigmas x reps x methods
    for (std::size_t i = 0; i + 1 < rows.size(); i += 2) {
        CHECK(rows[i].method == "spectral");
        CHECK(rows[i + 1].method == "spherical_kmeans");
        CHECK(rows[i].n == rows[i + 1].n);
        CHECK(rows[i].rep == rows[i + 1].rep);
    }
    for (const BenchRow& r : rows) {
        CHECK(r.center_error >= 0.0);
        CHECK(r.k_n == default_neighbor_count(r.extreme_count, r.tau));
    }
}

TEST_CASE("benchmark results do not depend on the worker count") {
    BenchConfig one = small_config();
    one.workers = 1;
    BenchConfig two = small_config();
    two.workers = 2;
    const auto a = run_benchmark(one);
    const auto b = run_benchmark(two);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].method == b[i].method);
        CHECK(a[i].center_error == b[i].center_error);
        CHECK(a[i].mass_error == b[i].mass_error);
        CHECK(a[i].max_atom_error == b[i].max_atom_error);
    }
}

TEST_CASE("noisier grid rows carry larger errors at equal extreme count") {
    // More noise means a smaller effective signal sample, so the median
    // center error must grow with sigma.
    BenchConfig cfg;
    cfg.model = BenchModel::lfm_noisy;
    cfg.loadings = Eigen::MatrixXd(4, 2);
    cfg.loadings << 0.1, 0.9, 0.2, 0.8, 0.3, 0.7, 0.4, 0.6;
    cfg.sample_sizes = {25000};
    cfg.extreme_counts = {400};
    cfg.taus = {5};
    cfg.sigmas = {1.0, 5.0};
    cfg.replications = 10;
    cfg.seed = 90;
    cfg.workers = 2;
    cfg.mode = EdgeRule::knn_mutual;
    const auto rows = run_benchmark(cfg);
    auto median_for = [&](double sigma) {
        std::vector<double> v;
        for (const BenchRow& r : rows)
            if (r.method == "spectral" && r.sigma == sigma) v.push_back(r.center_error);
        std::sort(v.begin(), v.end());
        return v[v.size() / 2];
    };
    CHECK(median_for(5.0) > median_for(1.0));
}

TEST_CASE("graph rule changes only metadata on well-separated extremes") {
    // Two tight atom clouds far apart: symmetric and mutual k-NN give the
    // same partition, only the recorded rule differs.
    RandomStream s(78);
    Eigen::MatrixXd angles(40, 3);
    for (int i = 0; i < 40; ++i) {
        Eigen::RowVector3d base = i < 15 ? Eigen::RowVector3d(1, 0, 0) : Eigen::RowVector3d(0, 1, 0);
        for (int j = 0; j < 3; ++j) base[j] += 0.02 * (s.next_open01() - 0.5);
        angles.row(i) = base / base.norm();
    }
    ExtremalSample e;
    e.threshold = 1.0;
    e.sample_size = 40;
    e.angles = angles;
    e.radii = Eigen::VectorXd::Constant(40, 2.0);
    for (Eigen::Index i = 0; i < 40; ++i) e.indices.push_back(i);

    // k large enough that the mutual rule keeps each cloud internally
    // connected (mutual k-NN drops non-reciprocated links, so it fragments
    // sooner than the symmetric rule at small k).
    ClusterOptions sym, mut;
    sym.mode = EdgeRule::knn_symmetric;
    mut.mode = EdgeRule::knn_mutual;
    RandomStream c1(79), c2(79);
    const ClusteringResult a = spectral_cluster(e, 2, 10, c1, sym);
    const ClusteringResult b = spectral_cluster(e, 2, 10, c2, mut);
    CHECK(zero_eigenvalue_multiplicity(a.laplacian_eigenvalues) == 2);
    CHECK(zero_eigenvalue_multiplicity(b.laplacian_eigenvalues) == 2);
    CHECK(a.rule == EdgeRule::knn_symmetric);
    CHECK(b.rule == EdgeRule::knn_mutual);
    CHECK(a.labels == b.labels);
}
