#include "xsc/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <thread>

#include "xsc/errors.hpp"

namespace xsc {

namespace {

struct Cell {
    std::size_t n;
    std::size_t extreme_count;
    double tau;
    double sigma;
    std::size_t index;
};

struct MethodScore {
    double center_error;
    double mass_error;
    double max_atom_error;
};

MethodScore score(const Eigen::MatrixXd& atoms, const Eigen::VectorXd& masses,
                  const AngularMeasure& truth) {
    const bool truncate = atoms.rows() > truth.atoms.rows();
    const Matching match = match_atoms(atoms, truth.atoms, truncate);
    MethodScore s{match.frobenius_error, 0.0, 0.0};
    for (Eigen::Index j = 0; j < truth.atoms.rows(); ++j) {
        const auto i = static_cast<Eigen::Index>(match.permutation[static_cast<std::size_t>(j)]);
        s.mass_error = std::max(s.mass_error, std::abs(masses[i] - truth.masses[j]));
        s.max_atom_error =
            std::max(s.max_atom_error, (atoms.row(i) - truth.atoms.row(j)).norm());
    }
    return s;
}

} // namespace

AngularMeasure benchmark_truth(const BenchConfig& config, double sigma) {
    switch (config.model) {
        case BenchModel::ma:
            return ma_angular_measure(config.coeffs, config.alpha, config.embed_dim);
        case BenchModel::lfm_noisy: {
            AngularMeasure m = noisy_lfm_angular_measure(config.loadings, sigma,
                                                         static_cast<std::size_t>(
                                                             config.loadings.rows()));
            return m;
        }
        case BenchModel::lfm:
            return lfm_angular_measure(config.loadings, config.alpha, config.tail_case);
    }
    throw InvalidParameter("unknown benchmark model");
}

std::vector<BenchRow> run_benchmark(const BenchConfig& config) {
    if (config.sample_sizes.size() != config.extreme_counts.size())
        throw InvalidParameter("sample_sizes and extreme_counts must pair up");
    if (config.replications < 1) throw InvalidParameter("replications must be >= 1");

    std::vector<Cell> cells;
    for (std::size_t li = 0; li < config.sample_sizes.size(); ++li)
        for (double tau : config.taus)
            for (double sigma : config.sigmas)
                cells.push_back({config.sample_sizes[li], config.extreme_counts[li], tau, sigma,
                                 cells.size()});

    const std::size_t jobs = cells.size() * config.replications;
    std::vector<BenchRow> rows(jobs * 2);
    const RandomStream root = RandomStream(config.seed).substream("benchmark");

    auto run_job = [&](std::size_t job) {
        const Cell& cell = cells[job / config.replications];
        const std::size_t rep = job % config.replications;
        RandomStream stream = root.substream(cell.index).substream(rep);

        SampleMatrix sample;
        if (config.model == BenchModel::ma) {
            RandomStream sim = stream.substream("sim");
            sample = simulate_ma_embedding(config.coeffs, config.alpha, cell.n, config.embed_dim,
                                           sim);
        } else {
            FactorModelSpec spec;
            spec.loadings = config.loadings;
            spec.alpha = config.alpha;
            spec.sigma = cell.sigma;
            spec.factor_law = config.law;
            spec.tail_case = config.tail_case;
            RandomStream sim = stream.substream("sim");
            sample = simulate_lfm(spec, cell.n, sim);
        }

        const ExtremalSample extremes =
            select_extremes(sample, SelectionRule::top_count(cell.extreme_count));
        const std::size_t k_n = default_neighbor_count(cell.extreme_count, cell.tau);
        const AngularMeasure truth = benchmark_truth(config, cell.sigma);
        std::size_t m = config.m;
        if (m == 0)
            m = static_cast<std::size_t>(truth.atoms.rows()) + (cell.sigma > 0.0 ? 1 : 0);

        ClusterOptions copts;
        copts.kernel_scale = config.kernel_scale;
        copts.mode = config.mode;
        copts.kmeans = config.kmeans;

        RandomStream spectral_stream = stream.substream("spectral");
        const ClusteringResult spec_result =
            spectral_cluster(extremes, m, k_n, spectral_stream, copts);
        const MethodScore spec_score = score(spec_result.atoms_hat, spec_result.masses_hat, truth);

        RandomStream baseline_stream = stream.substream("spherical");
        const KMeansResult base =
            spherical_kmeans(extremes.angles, m, baseline_stream, config.kmeans);
        Eigen::VectorXd base_masses = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
        for (int l : base.labels) base_masses[l] += 1.0;
        base_masses /= static_cast<double>(base.labels.size());
        const MethodScore base_score = score(base.centroids, base_masses, truth);

        BenchRow common;
        common.n = cell.n;
        common.extreme_count = cell.extreme_count;
        common.tau = cell.tau;
        common.sigma = cell.sigma;
        common.k_n = k_n;
        common.rep = rep;

        BenchRow& r0 = rows[job * 2];
        r0 = common;
        r0.method = "spectral";
        r0.center_error = spec_score.center_error;
        r0.mass_error = spec_score.mass_error;
        r0.max_atom_error = spec_score.max_atom_error;

        BenchRow& r1 = rows[job * 2 + 1];
        r1 = common;
        r1.method = "spherical_kmeans";
        r1.center_error = base_score.center_error;
        r1.mass_error = base_score.mass_error;
        r1.max_atom_error = base_score.max_atom_error;
    };

    std::size_t workers = config.workers;
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, jobs);

    if (workers <= 1) {
        for (std::size_t job = 0; job < jobs; ++job) run_job(job);
    } else {
        std::atomic<std::size_t> next{0};
        std::exception_ptr error;
        std::mutex error_mutex;
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (;;) {
                    const std::size_t job = next.fetch_add(1);
                    if (job >= jobs) return;
                    try {
                        run_job(job);
                    } catch (...) {
                        std::lock_guard<std::mutex> lock(error_mutex);
                        if (!error) error = std::current_exception();
                        return;
                    }
                }
            });
        }
        for (auto& t : pool) t.join();
        if (error) std::rethrow_exception(error);
    }
    return rows;
}

void write_benchmark_csv(const std::string& path, const std::vector<BenchRow>& rows) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing", path);
    out << "n,N,tau,sigma,k_n,method,rep,center_error,mass_error,max_atom_error\n";
    char buf[128];
    for (const BenchRow& r : rows) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g", r.center_error, r.mass_error,
                      r.max_atom_error);
        out << r.n << "," << r.extreme_count << "," << r.tau << "," << r.sigma << "," << r.k_n
            << "," << r.method << "," << r.rep << "," << buf << "\n";
    }
    if (!out) throw IoError("write failed", path);
}

} // namespace xsc
