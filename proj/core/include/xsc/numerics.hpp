#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

#include "xsc/rng.hpp"

namespace xsc {

/// Full spectrum of a symmetric matrix, eigenvalues ascending and columns of
/// `eigenvectors` aligned and orthonormal.
struct EigenDecomposition {
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXd eigenvectors;
};

struct JacobiOptions {
    double tol_rel = 1e-12; ///< stop when off-diagonal Frobenius mass < tol_rel * ||M||_F
    int max_sweeps = 100;
};

/// Full eigendecomposition of a symmetric matrix. Input must be symmetric
/// within 1e-10 (it is symmetrized internally); throws NumericalFailure with
/// the final relative residual if the solver does not converge.
EigenDecomposition sym_eigen(const Eigen::MatrixXd& M);

/// Dependency-free cyclic Jacobi reference solver with the same contract.
/// Rotation sweeps stop when the off-diagonal Frobenius mass drops below
/// tol_rel * ||M||_F. Slower than sym_eigen on large matrices; kept as an
/// independent cross-check.
EigenDecomposition sym_eigen_jacobi(const Eigen::MatrixXd& M, const JacobiOptions& opts = {});

struct KMeansOptions {
    std::size_t restarts = 10;
    double tol = 1e-8;
    std::size_t max_iter = 300;
};

struct KMeansResult {
    std::vector<int> labels;    ///< nearest centroid per point, ties to lowest index
    Eigen::MatrixXd centroids;  ///< K x m
    double inertia = 0.0;       ///< summed squared distance to assigned centroids
    std::vector<double> iteration_inertia; ///< objective after each Lloyd iteration
};

/// Lloyd k-means, best of `restarts` k-means++ initializations drawn from
/// labeled substreams of `stream` (bit-reproducible). Empty clusters are
/// reseeded at the point farthest from its centroid.
KMeansResult kmeans(const Eigen::MatrixXd& points, std::size_t K, RandomStream& stream,
                    const KMeansOptions& opts = {});

/// Spherical k-means on unit rows: assignment by cosine similarity, centroid
/// update by normalized cluster mean. `inertia` is the equivalent chordal
/// objective sum ||x - c||^2.
KMeansResult spherical_kmeans(const Eigen::MatrixXd& points, std::size_t K, RandomStream& stream,
                              const KMeansOptions& opts = {});

struct Matching {
    std::vector<std::size_t> permutation; ///< permutation[j] = estimated row matched to truth row j
    double frobenius_error = 0.0;         ///< Frobenius norm of the matched difference
};

/// Hungarian assignment minimizing sum_j ||estimated[perm[j]] - truth[j]||^2
/// over permutations; both inputs K x d.
Matching best_matching(const Eigen::MatrixXd& estimated, const Eigen::MatrixXd& truth);

/// Minimum-cost assignment of every row to a distinct column (rows <= cols);
/// returns the chosen column per row.
std::vector<std::size_t> min_cost_assignment(const Eigen::MatrixXd& cost);

/// Gamma function by the Lanczos approximation (relative error well below
/// 1e-10 on the positive half-integers used here).
double lanczos_gamma(double x);

/// E||N|| for a d-dimensional standard normal: sqrt(2) Gamma((d+1)/2) / Gamma(d/2).
double expected_norm_std_normal(std::size_t d);

} // namespace xsc
