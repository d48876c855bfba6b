#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "xsc/extremal.hpp"
#include "xsc/graph.hpp"
#include "xsc/numerics.hpp"
#include "xsc/rng.hpp"

namespace xsc {

/// Neighbor-count rule ceil(N / (tau ln N)) + 1 for an extremal sample of
/// size N; tau must exceed 1.
std::size_t default_neighbor_count(std::size_t extreme_count, double tau);

struct ClusterOptions {
    double kernel_scale = 1.0;       ///< s in exp(-s||x-y||)
    EdgeRule mode = EdgeRule::knn_symmetric;
    KMeansOptions kmeans;
};

/// Count of eigenvalues below the zero tolerance; on a normalized Laplacian
/// without isolated nodes this equals the number of connected components.
/// The default tolerance separates true zeros from the smallest positive
/// eigenvalues of well-separated graphs at this scale.
std::size_t zero_eigenvalue_multiplicity(const Eigen::VectorXd& eigenvalues, double tol = 1e-8);

/// Output of the extremal spectral clustering pipeline.
struct ClusteringResult {
    std::vector<int> labels;      ///< per extreme: 0..m-1, or -1 for stripped singletons
    std::size_t m = 0;            ///< cluster count used
    Eigen::VectorXd laplacian_eigenvalues; ///< ascending, of the stripped graph
    Eigen::MatrixXd atoms_hat;    ///< m x d unit rows: normalized cluster means
    Eigen::VectorXd masses_hat;   ///< cluster share of the extremal sample
    std::vector<Eigen::Index> singletons;  ///< extreme indices stripped as isolated nodes
    double singleton_mass = 0.0;  ///< 1/N per singleton; masses_hat sum + this = 1
    std::vector<Eigen::Index> zero_rows;   ///< embedding rows flagged as numerically zero

    std::size_t k_n = 0;
    double kernel_scale = 1.0;
    EdgeRule rule = EdgeRule::knn_symmetric;
    std::uint64_t seed = 0;
};

/// Scale each nonzero row of U to unit norm; rows with norm below 1e-12 stay
/// zero and their indices are reported.
Eigen::MatrixXd row_normalize(const Eigen::MatrixXd& U, std::vector<Eigen::Index>& zero_rows);

/// Partition the nodes of a weighted graph (no isolated nodes) into m groups:
/// Laplacian, m smallest eigenvectors, row normalization, k-means on the
/// embedded rows.
struct SpectralPartition {
    std::vector<int> labels;
    Eigen::VectorXd eigenvalues;
    std::vector<Eigen::Index> zero_rows;
};
SpectralPartition spectral_partition(const WeightedGraph& g, std::size_t m, RandomStream& stream,
                                     const KMeansOptions& opts = {});

/// Full pipeline on an extremal sample: k-NN graph on the angles, kernel
/// weights, isolated-node stripping, spectral partition, then atom and mass
/// estimates (normalized cluster means and cluster shares).
ClusteringResult spectral_cluster(const ExtremalSample& extremes, std::size_t m, std::size_t k_n,
                                  RandomStream& stream, const ClusterOptions& opts = {});

/// Descending eigenvalues of the fully connected kernel matrix on the angles,
/// for choosing the cluster count by eye.
Eigen::VectorXd screeplot(const ExtremalSample& extremes, double s);

} // namespace xsc
