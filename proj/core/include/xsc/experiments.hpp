#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "xsc/cluster.hpp"
#include "xsc/measure.hpp"
#include "xsc/variates.hpp"

namespace xsc {

enum class BenchModel { lfm, lfm_noisy, ma };

/// Grid definition for replicated end-to-end runs. sample_sizes and
/// extreme_counts are paired ladders (same length); taus and sigmas are
/// crossed with them.
struct BenchConfig {
    BenchModel model = BenchModel::lfm;
    Eigen::MatrixXd loadings;       ///< LFM loading matrix
    Eigen::VectorXd coeffs;         ///< moving-average coefficients (model == ma)
    std::size_t embed_dim = 2;
    double alpha = 1.0;
    FactorLaw law = FactorLaw::frechet;
    TailCase tail_case = TailCase::nonnegative;

    std::vector<std::size_t> sample_sizes{1000, 5000, 25000, 125000};
    std::vector<std::size_t> extreme_counts{100, 200, 400, 800};
    std::vector<double> taus{3, 5, 7, 9};
    std::vector<double> sigmas{0.0};
    std::size_t replications = 50;
    std::size_t m = 0; ///< 0: number of distinct atoms, plus one when sigma > 0

    double kernel_scale = 1.0;
    EdgeRule mode = EdgeRule::knn_symmetric;
    KMeansOptions kmeans;
    std::size_t workers = 0; ///< 0: hardware concurrency
    std::uint64_t seed = 0;
};

/// One method on one replication of one grid cell.
struct BenchRow {
    std::size_t n = 0;
    std::size_t extreme_count = 0;
    double tau = 0.0;
    double sigma = 0.0;
    std::size_t k_n = 0;
    std::string method; ///< "spectral" or "spherical_kmeans"
    std::size_t rep = 0;
    double center_error = 0.0;   ///< matched Frobenius error of the atom estimates
    double mass_error = 0.0;     ///< max matched |mass_hat - mass|
    double max_atom_error = 0.0; ///< max matched per-atom distance
};

/// Runs every (ladder step, tau, sigma) cell for `replications` independent
/// replications, spectral clustering and the spherical k-means baseline on
/// the same extremal sample. Replications run in a worker pool; every
/// replication owns a labeled substream, so results do not depend on worker
/// count. Row order is canonical: cell-major, then replication, then method.
std::vector<BenchRow> run_benchmark(const BenchConfig& config);

/// `n,N,tau,sigma,k_n,method,rep,center_error,mass_error,max_atom_error`.
void write_benchmark_csv(const std::string& path, const std::vector<BenchRow>& rows);

/// The true angular measure the benchmark scores against (signal atoms only
/// for the noisy model).
AngularMeasure benchmark_truth(const BenchConfig& config, double sigma);

} // namespace xsc
