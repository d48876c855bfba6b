#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <utility>
#include <vector>

namespace xsc {

enum class EdgeRule { knn_symmetric, knn_mutual, full };

using Edge = std::pair<Eigen::Index, Eigen::Index>; // i < j

struct EdgeSet {
    std::vector<Edge> edges;
    EdgeRule rule = EdgeRule::knn_symmetric;
    std::size_t k = 0;
};

/// Kernel-weighted undirected graph on a point set.
struct WeightedGraph {
    Eigen::MatrixXd weights; ///< symmetric, nonnegative, zero diagonal
    EdgeRule rule = EdgeRule::full;
    std::size_t k = 0;       ///< neighbor count (0 for the full rule)
    double kernel_scale = 1.0;

    Eigen::Index n_nodes() const { return weights.rows(); }
    Eigen::VectorXd degrees() const { return weights.rowwise().sum(); }
};

/// k-nearest-neighbor edges under Euclidean (chordal) distance, exact brute
/// force. Symmetric mode links i,j when either is among the other's k nearest;
/// mutual mode requires both. Ties at the k-th distance go to the lower index.
EdgeSet knn_edges(const Eigen::MatrixXd& points, std::size_t k, EdgeRule mode);

/// Weights w_ij = exp(-s ||x_i - x_j||) on the given edges, 0 elsewhere.
WeightedGraph kernel_weights(const Eigen::MatrixXd& points, const EdgeSet& edges, double s);

/// Exponential kernel over every pair (zero diagonal).
WeightedGraph full_kernel_matrix(const Eigen::MatrixXd& points, double s);

/// Normalized symmetric Laplacian I - D^{-1/2} W D^{-1/2}. Throws
/// IsolatedNode when any degree is zero; callers strip such nodes first.
Eigen::MatrixXd normalized_laplacian(const WeightedGraph& g);

/// Union-find component labels; each label is the smallest member index.
std::vector<Eigen::Index> connected_components(const std::vector<Edge>& edges,
                                               std::size_t n_nodes);

/// Components of a weighted graph (edges are the positive weights).
std::vector<Eigen::Index> connected_components(const WeightedGraph& g);

/// Indices of zero-degree nodes.
std::vector<Eigen::Index> isolated_nodes(const WeightedGraph& g);

/// The subgraph obtained by deleting the given nodes (sorted ascending);
/// `kept` receives the surviving original indices.
WeightedGraph strip_nodes(const WeightedGraph& g, const std::vector<Eigen::Index>& drop,
                          std::vector<Eigen::Index>& kept);

} // namespace xsc
