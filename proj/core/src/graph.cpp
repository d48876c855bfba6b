#include "xsc/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "xsc/errors.hpp"

namespace xsc {

namespace {

struct UnionFind {
    explicit UnionFind(std::size_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), std::size_t{0});
    }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
    std::vector<std::size_t> parent;
};

} // namespace

EdgeSet knn_edges(const Eigen::MatrixXd& points, std::size_t k, EdgeRule mode) {
    const Eigen::Index n = points.rows();
    if (k < 1 || k >= static_cast<std::size_t>(n))
        throw InvalidParameter("k must satisfy 1 <= k < number of points");
    if (mode == EdgeRule::full) throw InvalidParameter("knn_edges needs a k-NN mode");

    // neighbor[i] = the k nearest of i by (distance, index).
    std::vector<std::vector<Eigen::Index>> neighbor(static_cast<std::size_t>(n));
    std::vector<std::pair<double, Eigen::Index>> dist(static_cast<std::size_t>(n - 1));
    for (Eigen::Index i = 0; i < n; ++i) {
        dist.clear();
        for (Eigen::Index j = 0; j < n; ++j) {
            if (j == i) continue;
            dist.emplace_back((points.row(i) - points.row(j)).norm(), j);
        }
        std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k),
                          dist.end());
        auto& ni = neighbor[static_cast<std::size_t>(i)];
        ni.reserve(k);
        for (std::size_t r = 0; r < k; ++r) ni.push_back(dist[r].second);
    }

    auto is_neighbor = [&](Eigen::Index of, Eigen::Index who) {
        const auto& v = neighbor[static_cast<std::size_t>(of)];
        return std::find(v.begin(), v.end(), who) != v.end();
    };

    EdgeSet out;
    out.rule = mode;
    out.k = k;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j : neighbor[static_cast<std::size_t>(i)]) {
            if (mode == EdgeRule::knn_mutual && !is_neighbor(j, i)) continue;
            out.edges.emplace_back(std::min(i, j), std::max(i, j));
        }
    }
    std::sort(out.edges.begin(), out.edges.end());
    out.edges.erase(std::unique(out.edges.begin(), out.edges.end()), out.edges.end());
    return out;
}

WeightedGraph kernel_weights(const Eigen::MatrixXd& points, const EdgeSet& edges, double s) {
    if (!(s > 0.0)) throw InvalidParameter("kernel scale s must be > 0");
    const Eigen::Index n = points.rows();
    WeightedGraph g;
    g.rule = edges.rule;
    g.k = edges.k;
    g.kernel_scale = s;
    g.weights = Eigen::MatrixXd::Zero(n, n);
    for (const auto& [i, j] : edges.edges) {
        if (i < 0 || j >= n || i == j) throw InvalidParameter("edge outside point set");
        const double w = std::exp(-s * (points.row(i) - points.row(j)).norm());
        g.weights(i, j) = w;
        g.weights(j, i) = w;
    }
    return g;
}

WeightedGraph full_kernel_matrix(const Eigen::MatrixXd& points, double s) {
    if (!(s > 0.0)) throw InvalidParameter("kernel scale s must be > 0");
    const Eigen::Index n = points.rows();
    WeightedGraph g;
    g.rule = EdgeRule::full;
    g.kernel_scale = s;
    g.weights = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double w = std::exp(-s * (points.row(i) - points.row(j)).norm());
            g.weights(i, j) = w;
            g.weights(j, i) = w;
        }
    return g;
}

Eigen::MatrixXd normalized_laplacian(const WeightedGraph& g) {
    const Eigen::Index n = g.n_nodes();
    const Eigen::VectorXd deg = g.degrees();
    for (Eigen::Index i = 0; i < n; ++i)
        if (deg[i] <= 0.0)
            throw IsolatedNode("node " + std::to_string(i) + " has zero degree");

    const Eigen::VectorXd inv_sqrt = deg.array().rsqrt();
    Eigen::MatrixXd L = Eigen::MatrixXd::Identity(n, n);
    // Fill both triangles from one product so L stays exactly symmetric.
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double v = g.weights(i, j) * inv_sqrt[i] * inv_sqrt[j];
            L(i, j) -= v;
            L(j, i) -= v;
        }
        L(i, i) -= g.weights(i, i) * inv_sqrt[i] * inv_sqrt[i];
    }
    return L;
}

std::vector<Eigen::Index> connected_components(const std::vector<Edge>& edges,
                                               std::size_t n_nodes) {
    UnionFind uf(n_nodes);
    for (const auto& [i, j] : edges)
        uf.unite(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    std::vector<Eigen::Index> label(n_nodes);
    // Roots are minimal within their component by the union policy.
    for (std::size_t i = 0; i < n_nodes; ++i)
        label[i] = static_cast<Eigen::Index>(uf.find(i));
    return label;
}

std::vector<Eigen::Index> connected_components(const WeightedGraph& g) {
    std::vector<Edge> edges;
    const Eigen::Index n = g.n_nodes();
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j)
            if (g.weights(i, j) > 0.0) edges.emplace_back(i, j);
    return connected_components(edges, static_cast<std::size_t>(n));
}

std::vector<Eigen::Index> isolated_nodes(const WeightedGraph& g) {
    std::vector<Eigen::Index> out;
    const Eigen::VectorXd deg = g.degrees();
    for (Eigen::Index i = 0; i < deg.size(); ++i)
        if (deg[i] <= 0.0) out.push_back(i);
    return out;
}

WeightedGraph strip_nodes(const WeightedGraph& g, const std::vector<Eigen::Index>& drop,
                          std::vector<Eigen::Index>& kept) {
    kept.clear();
    const Eigen::Index n = g.n_nodes();
    std::vector<bool> dropped(static_cast<std::size_t>(n), false);
    for (Eigen::Index i : drop) dropped[static_cast<std::size_t>(i)] = true;
    for (Eigen::Index i = 0; i < n; ++i)
        if (!dropped[static_cast<std::size_t>(i)]) kept.push_back(i);

    WeightedGraph out;
    out.rule = g.rule;
    out.k = g.k;
    out.kernel_scale = g.kernel_scale;
    const auto m = static_cast<Eigen::Index>(kept.size());
    out.weights.resize(m, m);
    for (Eigen::Index a = 0; a < m; ++a)
        for (Eigen::Index b = 0; b < m; ++b)
            out.weights(a, b) = g.weights(kept[static_cast<std::size_t>(a)],
                                          kept[static_cast<std::size_t>(b)]);
    return out;
}

} // namespace xsc
