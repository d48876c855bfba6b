#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "oracles.hpp"
#include "xsc/errors.hpp"
#include "xsc/graph.hpp"
#include "xsc/cluster.hpp"
#include "xsc/numerics.hpp"
#include "xsc/rng.hpp"

using namespace xsc;

namespace {

// n points on S^2 around a base direction, spread controls the cloud size.
Eigen::MatrixXd sphere_cloud(RandomStream& s, const Eigen::Vector3d& base, int n, double spread) {
    Eigen::MatrixXd out(n, 3);
    for (int i = 0; i < n; ++i) {
        Eigen::Vector3d p = base;
        for (int j = 0; j < 3; ++j) p[j] += spread * (s.next_open01() - 0.5);
        out.row(i) = p.transpose() / p.norm();
    }
    return out;
}

} // namespace

TEST_CASE("equidistant triple with k=1: deterministic tie-break") {
    // equilateral triangle on the circle
    Eigen::MatrixXd pts(3, 2);
    const double c = std::cos(2.0 * M_PI / 3.0), s = std::sin(2.0 * M_PI / 3.0);
    pts << 1, 0, c, s, c, -s;
    const EdgeSet e = knn_edges(pts, 1, EdgeRule::knn_symmetric);
    REQUIRE(e.edges.size() == 2);
    CHECK(e.edges[0] == Edge{0, 1});
    CHECK(e.edges[1] == Edge{0, 2});
}

TEST_CASE("two separated clusters stay disconnected at k=4") {
    RandomStream st(11);
    Eigen::MatrixXd a = sphere_cloud(st, {1, 0, 0}, 5, 0.05);
    Eigen::MatrixXd b = sphere_cloud(st, {0, 0, 1}, 5, 0.05);
    Eigen::MatrixXd pts(10, 3);
    pts << a, b;
    const EdgeSet e = knn_edges(pts, 4, EdgeRule::knn_symmetric);
    for (const auto& [i, j] : e.edges) CHECK((i < 5) == (j < 5));
    const auto labels = connected_components(e.edges, 10);
    CHECK(labels[0] == 0);
    CHECK(labels[9] == 5);
}

TEST_CASE("mutual edges are a subset of symmetric edges") {
    RandomStream st(12);
    Eigen::MatrixXd pts = sphere_cloud(st, {1, 1, 1}, 40, 1.5);
    const EdgeSet sym = knn_edges(pts, 5, EdgeRule::knn_symmetric);
    const EdgeSet mut = knn_edges(pts, 5, EdgeRule::knn_mutual);
    CHECK(mut.edges.size() <= sym.edges.size());
    for (const Edge& e : mut.edges)
        CHECK(std::find(sym.edges.begin(), sym.edges.end(), e) != sym.edges.end());
}

TEST_CASE("kernel weights: exact values and monotonicity") {
    Eigen::MatrixXd pts(3, 2);
    pts << 1, 0, -1, 0, 1, 0; // antipodal pair + coincident copy of row 0
    EdgeSet e;
    e.edges = {{0, 1}, {0, 2}, {1, 2}};
    const WeightedGraph g = kernel_weights(pts, e, 1.0);
    CHECK(g.weights(0, 2) == doctest::Approx(1.0).epsilon(1e-15));           // coincident
    CHECK(g.weights(0, 1) == doctest::Approx(std::exp(-2.0)).epsilon(1e-15)); // antipodal
    CHECK(g.weights(0, 1) == g.weights(1, 0));
    CHECK(g.weights(0, 0) == 0.0);
    CHECK_THROWS_AS((void)kernel_weights(pts, e, 0.0), InvalidParameter);

    // full-matrix rule: same kernel values on the complete edge set
    const WeightedGraph f = full_kernel_matrix(pts, 1.0);
    CHECK(f.weights(0, 2) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(f.weights(0, 1) == doctest::Approx(std::exp(-2.0)).epsilon(1e-15));
    CHECK(f.rule == EdgeRule::full);
    CHECK_THROWS_AS((void)full_kernel_matrix(pts, -1.0), InvalidParameter);

    // strictly decreasing in distance
    RandomStream st(13);
    Eigen::MatrixXd cloud = sphere_cloud(st, {1, 0, 0}, 20, 1.0);
    const WeightedGraph full = full_kernel_matrix(cloud, 1.0);
    for (int i = 1; i < 19; ++i) {
        const double di = (cloud.row(0) - cloud.row(i)).norm();
        const double dj = (cloud.row(0) - cloud.row(i + 1)).norm();
        if (di < dj) CHECK(full.weights(0, i) > full.weights(0, i + 1));
        if (di > dj) CHECK(full.weights(0, i) < full.weights(0, i + 1));
    }
}

TEST_CASE("laplacian of two disjoint edges has a double zero eigenvalue") {
    Eigen::MatrixXd pts(4, 2);
    pts << 1, 0, 0.99, 0.01, -1, 0, -0.99, -0.01;
    EdgeSet e;
    e.edges = {{0, 1}, {2, 3}};
    const WeightedGraph g = kernel_weights(pts, e, 1.0);
    const Eigen::MatrixXd L = normalized_laplacian(g);
    const EigenDecomposition eig = sym_eigen(L);
    CHECK((eig.eigenvalues.array() < 1e-8).count() == 2);
}

TEST_CASE("complete graph on 3 nodes with equal weights: spectrum {0, 3/2, 3/2}") {
    WeightedGraph g;
    g.weights.resize(3, 3);
    const double w = 0.37;
    g.weights << 0, w, w, w, 0, w, w, w, 0;
    const Eigen::MatrixXd L = normalized_laplacian(g);
    const Eigen::VectorXd lambda = oracle::bisection_eigenvalues(L); // independent route
    CHECK(lambda[0] == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(std::abs(lambda[0]) < 1e-9);
    CHECK(lambda[1] == doctest::Approx(1.5).epsilon(1e-9));
    CHECK(lambda[2] == doctest::Approx(1.5).epsilon(1e-9));
    const EigenDecomposition eig = sym_eigen(L);
    CHECK((eig.eigenvalues - lambda).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("single edge: spectrum {0, 2}") {
    WeightedGraph g;
    g.weights.resize(2, 2);
    g.weights << 0, 0.5, 0.5, 0;
    const EigenDecomposition eig = sym_eigen(normalized_laplacian(g));
    CHECK(eig.eigenvalues[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(eig.eigenvalues[1] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("isolated node rejected by the laplacian") {
    WeightedGraph g;
    g.weights = Eigen::MatrixXd::Zero(3, 3);
    g.weights(0, 1) = g.weights(1, 0) = 1.0;
    CHECK_THROWS_AS((void)normalized_laplacian(g), IsolatedNode);
    CHECK(isolated_nodes(g) == std::vector<Eigen::Index>{2});
}

TEST_CASE("connected components: edge cases and BFS oracle") {
    CHECK(connected_components({}, 4) == std::vector<Eigen::Index>{0, 1, 2, 3});
    // path graph
    std::vector<Edge> path = {{0, 1}, {1, 2}, {2, 3}};
    CHECK(connected_components(path, 4) == std::vector<Eigen::Index>{0, 0, 0, 0});

    RandomStream st(14);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 12 + static_cast<int>(st.next_open01() * 30);
        std::vector<Edge> edges;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (st.next_open01() < 0.06) edges.emplace_back(i, j);
        const auto mine = connected_components(edges, static_cast<std::size_t>(n));
        const auto ref = oracle::bfs_components(edges, static_cast<std::size_t>(n));
        // same partition and canonical (smallest-member) labels
        CHECK(mine == ref);
    }
}

TEST_CASE("zero-eigenvalue multiplicity counts components and the scaled "
          "indicators span the null space") {
    RandomStream st(15);
    for (int trial = 0; trial < 25; ++trial) {
        const int blocks = 1 + static_cast<int>(st.next_open01() * 4);
        std::vector<int> sizes;
        int total = 0;
        for (int b = 0; b < blocks; ++b) {
            const int size = 2 + static_cast<int>(st.next_open01() * 9);
            sizes.push_back(size);
            total += size;
        }
        WeightedGraph g;
        g.weights = Eigen::MatrixXd::Zero(total, total);
        int base = 0;
        for (int size : sizes) {
            // random connected block: spanning chain + extra random edges
            for (int i = 1; i < size; ++i) {
                const double w = 0.1 + 0.9 * st.next_open01();
                g.weights(base + i - 1, base + i) = w;
                g.weights(base + i, base + i - 1) = w;
            }
            for (int i = 0; i < size; ++i)
                for (int j = i + 2; j < size; ++j)
                    if (st.next_open01() < 0.3) {
                        const double w = 0.1 + 0.9 * st.next_open01();
                        g.weights(base + i, base + j) = w;
                        g.weights(base + j, base + i) = w;
                    }
            base += size;
        }

        const Eigen::MatrixXd L = normalized_laplacian(g);
        const EigenDecomposition eig = sym_eigen(L);
        CHECK(zero_eigenvalue_multiplicity(eig.eigenvalues) ==
              static_cast<std::size_t>(blocks));
        CHECK(eig.eigenvalues.minCoeff() > -1e-10);
        CHECK(eig.eigenvalues.maxCoeff() < 2.0 + 1e-10);

        // null-space projection of each component's D^{1/2}-scaled indicator
        const Eigen::MatrixXd null_basis = eig.eigenvectors.leftCols(blocks);
        const Eigen::VectorXd deg = g.degrees();
        base = 0;
        for (int size : sizes) {
            Eigen::VectorXd v = Eigen::VectorXd::Zero(total);
            for (int i = 0; i < size; ++i) v[base + i] = std::sqrt(deg[base + i]);
            v /= v.norm();
            const Eigen::VectorXd residual = v - null_basis * (null_basis.transpose() * v);
            CHECK(residual.norm() < 1e-6);
            base += size;
        }
    }
}

TEST_CASE("weight symmetry survives every construction exactly") {
    RandomStream st(16);
    Eigen::MatrixXd pts = sphere_cloud(st, {0, 1, 0}, 60, 1.2);
    for (auto mode : {EdgeRule::knn_symmetric, EdgeRule::knn_mutual}) {
        const WeightedGraph g = kernel_weights(pts, knn_edges(pts, 7, mode), 1.0);
        CHECK((g.weights - g.weights.transpose()).cwiseAbs().maxCoeff() == 0.0);
    }
    const WeightedGraph full = full_kernel_matrix(pts, 2.0);
    CHECK((full.weights - full.weights.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(full.weights.diagonal().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("knn parameter validation") {
    Eigen::MatrixXd pts = Eigen::MatrixXd::Identity(3, 3);
    CHECK_THROWS_AS((void)knn_edges(pts, 3, EdgeRule::knn_symmetric), InvalidParameter);
    CHECK_THROWS_AS((void)knn_edges(pts, 0, EdgeRule::knn_symmetric), InvalidParameter);
}
