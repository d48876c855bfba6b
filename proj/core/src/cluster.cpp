#include "xsc/cluster.hpp"

#include <algorithm>
#include <cmath>

#include "xsc/errors.hpp"

namespace xsc {

std::size_t default_neighbor_count(std::size_t extreme_count, double tau) {
    if (extreme_count < 2) throw InvalidParameter("need at least 2 extremes");
    if (!(tau > 1.0)) throw InvalidParameter("tau must be > 1");
    const double n = static_cast<double>(extreme_count);
    return static_cast<std::size_t>(std::ceil(n / (tau * std::log(n)))) + 1;
}

std::size_t zero_eigenvalue_multiplicity(const Eigen::VectorXd& eigenvalues, double tol) {
    return static_cast<std::size_t>((eigenvalues.array() < tol).count());
}

Eigen::MatrixXd row_normalize(const Eigen::MatrixXd& U, std::vector<Eigen::Index>& zero_rows) {
    zero_rows.clear();
    Eigen::MatrixXd V = U;
    for (Eigen::Index i = 0; i < V.rows(); ++i) {
        const double norm = V.row(i).norm();
        if (norm < 1e-12) {
            zero_rows.push_back(i);
        } else {
            V.row(i) /= norm;
        }
    }
    return V;
}

SpectralPartition spectral_partition(const WeightedGraph& g, std::size_t m, RandomStream& stream,
                                     const KMeansOptions& opts) {
    const Eigen::Index n = g.n_nodes();
    if (m < 1) throw InvalidParameter("m must be >= 1");
    if (static_cast<Eigen::Index>(m) > n) throw InvalidParameter("m exceeds the node count");

    const Eigen::MatrixXd L = normalized_laplacian(g);
    const EigenDecomposition eig = sym_eigen(L);

    SpectralPartition out;
    out.eigenvalues = eig.eigenvalues;
    const Eigen::MatrixXd U = eig.eigenvectors.leftCols(static_cast<Eigen::Index>(m));
    const Eigen::MatrixXd V = row_normalize(U, out.zero_rows);
    out.labels = kmeans(V, m, stream, opts).labels;
    return out;
}

namespace {

/// Relabel clusters by first occurrence so output labels are stable under
/// any internal ordering of the k-means result.
void canonicalize_labels(std::vector<int>& labels, std::size_t m) {
    std::vector<int> remap(m, -1);
    int next = 0;
    for (int& l : labels) {
        if (l < 0) continue;
        if (remap[static_cast<std::size_t>(l)] < 0) remap[static_cast<std::size_t>(l)] = next++;
        l = remap[static_cast<std::size_t>(l)];
    }
}

} // namespace

ClusteringResult spectral_cluster(const ExtremalSample& extremes, std::size_t m, std::size_t k_n,
                                  RandomStream& stream, const ClusterOptions& opts) {
    const Eigen::Index N = extremes.angles.rows();
    if (N < 2) throw InvalidParameter("need at least 2 extremes");
    if (m < 1) throw InvalidParameter("m must be >= 1");

    const EdgeSet edges = knn_edges(extremes.angles, k_n, opts.mode);
    const WeightedGraph g = kernel_weights(extremes.angles, edges, opts.kernel_scale);

    const std::vector<Eigen::Index> isolated = isolated_nodes(g);
    std::vector<Eigen::Index> kept;
    const WeightedGraph sub = strip_nodes(g, isolated, kept);
    if (static_cast<std::size_t>(sub.n_nodes()) < m)
        throw InvalidParameter("m exceeds the node count after stripping isolated nodes");

    SpectralPartition part = spectral_partition(sub, m, stream, opts.kmeans);

    ClusteringResult out;
    out.m = m;
    out.k_n = k_n;
    out.kernel_scale = opts.kernel_scale;
    out.rule = opts.mode;
    out.seed = stream.key();
    out.laplacian_eigenvalues = std::move(part.eigenvalues);
    out.singletons = isolated;
    out.labels.assign(static_cast<std::size_t>(N), -1);
    for (std::size_t a = 0; a < kept.size(); ++a)
        out.labels[static_cast<std::size_t>(kept[a])] = part.labels[a];
    canonicalize_labels(out.labels, m);

    // Map flagged embedding rows back to extreme indices.
    for (Eigen::Index r : part.zero_rows) out.zero_rows.push_back(kept[static_cast<std::size_t>(r)]);

    // Atom and mass estimates.
    const Eigen::Index d = extremes.angles.cols();
    out.atoms_hat = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), d);
    Eigen::VectorXd counts = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
    for (Eigen::Index i = 0; i < N; ++i) {
        const int l = out.labels[static_cast<std::size_t>(i)];
        if (l < 0) continue;
        out.atoms_hat.row(l) += extremes.angles.row(i);
        counts[l] += 1.0;
    }
    for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(m); ++j) {
        const double norm = out.atoms_hat.row(j).norm();
        if (norm > 1e-12) {
            out.atoms_hat.row(j) /= norm;
        } else if (counts[j] > 0.0) {
            // Mean cancelled out; fall back to the lowest-index member.
            for (Eigen::Index i = 0; i < N; ++i)
                if (out.labels[static_cast<std::size_t>(i)] == static_cast<int>(j)) {
                    out.atoms_hat.row(j) = extremes.angles.row(i);
                    break;
                }
        }
    }
    out.masses_hat = counts / static_cast<double>(N);
    out.singleton_mass = static_cast<double>(isolated.size()) / static_cast<double>(N);
    return out;
}

Eigen::VectorXd screeplot(const ExtremalSample& extremes, double s) {
    if (extremes.angles.rows() < 2) throw InvalidParameter("need at least 2 extremes");
    const WeightedGraph g = full_kernel_matrix(extremes.angles, s);
    Eigen::VectorXd values = sym_eigen(g.weights).eigenvalues;
    std::reverse(values.data(), values.data() + values.size());
    return values;
}

} // namespace xsc
