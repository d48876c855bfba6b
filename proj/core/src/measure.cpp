#include "xsc/measure.hpp"

#include <cmath>
#include <vector>

#include "xsc/errors.hpp"

namespace xsc {

namespace {

// Append (atom, mass), merging into an existing atom within tolerance.
void add_atom(std::vector<Eigen::RowVectorXd>& atoms, std::vector<double>& masses,
              const Eigen::RowVectorXd& atom, double mass) {
    for (std::size_t k = 0; k < atoms.size(); ++k) {
        if ((atoms[k] - atom).norm() < 1e-10) {
            masses[k] += mass;
            return;
        }
    }
    atoms.push_back(atom);
    masses.push_back(mass);
}

AngularMeasure pack(const std::vector<Eigen::RowVectorXd>& atoms,
                    const std::vector<double>& masses, double continuous) {
    AngularMeasure out;
    const auto K = static_cast<Eigen::Index>(atoms.size());
    out.atoms.resize(K, atoms.empty() ? 0 : atoms.front().size());
    out.masses.resize(K);
    for (Eigen::Index k = 0; k < K; ++k) {
        out.atoms.row(k) = atoms[static_cast<std::size_t>(k)];
        out.masses[k] = masses[static_cast<std::size_t>(k)];
    }
    out.continuous_mass = continuous;
    return out;
}

} // namespace

AngularMeasure lfm_angular_measure(const Eigen::MatrixXd& A, double alpha, TailCase tail_case) {
    if (!(alpha > 0.0)) throw InvalidParameter("alpha must be > 0");
    if (A.size() == 0) throw InvalidParameter("empty loading matrix");
    if (tail_case == TailCase::nonnegative && (A.array() < 0.0).any())
        throw InvalidParameter("nonnegative case requires A >= 0");

    const Eigen::Index p = A.cols();
    double w = 0.0;
    for (Eigen::Index k = 0; k < p; ++k) {
        const double norm = A.col(k).norm();
        if (norm == 0.0)
            throw InvalidParameter("loading column " + std::to_string(k) + " has zero norm");
        w += std::pow(norm, alpha);
    }

    std::vector<Eigen::RowVectorXd> atoms;
    std::vector<double> masses;
    for (Eigen::Index k = 0; k < p; ++k) {
        const double norm = A.col(k).norm();
        const Eigen::RowVectorXd direction = A.col(k).transpose() / norm;
        const double mass = std::pow(norm, alpha) / w;
        if (tail_case == TailCase::nonnegative) {
            add_atom(atoms, masses, direction, mass);
        } else {
            add_atom(atoms, masses, direction, 0.5 * mass);
            add_atom(atoms, masses, -direction, 0.5 * mass);
        }
    }
    return pack(atoms, masses, 0.0);
}

AngularMeasure noisy_lfm_angular_measure(const Eigen::MatrixXd& A, double sigma, std::size_t d) {
    if (sigma < 0.0) throw InvalidParameter("sigma must be >= 0");
    AngularMeasure pure = lfm_angular_measure(A, 1.0, TailCase::nonnegative);
    if (sigma == 0.0) return pure;

    double signal = 0.0;
    for (Eigen::Index k = 0; k < A.cols(); ++k) signal += A.col(k).norm();
    const double noise = sigma * expected_norm_std_normal(d);
    const double w = signal + noise;

    AngularMeasure out = pure;
    out.masses *= signal / w;
    out.continuous_mass = noise / w;
    return out;
}

AngularMeasure ma_angular_measure(const Eigen::VectorXd& coeffs, double alpha,
                                  std::size_t embed_dim) {
    return lfm_angular_measure(ma_loading_matrix(coeffs, embed_dim), alpha,
                               TailCase::symmetric);
}

Eigen::MatrixXd limit_deviation_sampler(const Eigen::MatrixXd& A, double alpha,
                                        std::size_t factor, FactorLaw law, std::size_t count,
                                        RandomStream& stream) {
    const Eigen::Index d = A.rows();
    const Eigen::Index p = A.cols();
    const auto j = static_cast<Eigen::Index>(factor);
    if (j >= p) throw InvalidParameter("factor index out of range");
    if (!(alpha > 0.0)) throw InvalidParameter("alpha must be > 0");

    const Eigen::VectorXd aj = A.col(j);
    const double nj2 = aj.squaredNorm();

    Eigen::MatrixXd out(static_cast<Eigen::Index>(count), d);
    Eigen::VectorXd x(d);
    for (Eigen::Index r = 0; r < out.rows(); ++r) {
        const double w_radius = pareto_quantile(stream.next_open01(), alpha);
        x.setZero();
        for (Eigen::Index m = 0; m < p; ++m) {
            if (m == j) continue;
            x += A.col(m) * sample_factor(stream, law, alpha);
        }
        // S_l = ||a_j||^2 x_l - (a_j . x) a_{lj}: orthogonal to a_j by construction.
        const Eigen::VectorXd s = nj2 * x - aj.dot(x) * aj;
        out.row(r) = s.transpose() / (nj2 * w_radius);
    }
    return out;
}

Eigen::MatrixXd empirical_deviations(const SampleMatrix& sample, const Eigen::MatrixXd& A,
                                     double alpha, double threshold, std::size_t factor) {
    if (!sample.Z) throw MissingLatents("empirical deviations require retained latents");
    if (!(threshold > 0.0)) throw InvalidParameter("threshold must be > 0");
    const auto j = static_cast<Eigen::Index>(factor);
    if (j >= A.cols()) throw InvalidParameter("factor index out of range");

    double w = 0.0;
    for (Eigen::Index k = 0; k < A.cols(); ++k) w += std::pow(A.col(k).norm(), alpha);
    const double factor_threshold = threshold / std::pow(w, 1.0 / alpha);
    const Eigen::RowVectorXd c = A.col(j).transpose() / A.col(j).norm();

    std::vector<Eigen::Index> rows;
    for (Eigen::Index i = 0; i < sample.X.rows(); ++i) {
        if (sample.X.row(i).norm() > threshold && (*sample.Z)(i, j) > factor_threshold)
            rows.push_back(i);
    }
    Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), A.rows());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const Eigen::RowVectorXd xi = sample.X.row(rows[r]);
        out.row(static_cast<Eigen::Index>(r)) = threshold * (xi / xi.norm() - c);
    }
    return out;
}

double snr(const Eigen::MatrixXd& A, double sigma, std::size_t d) {
    if (sigma < 0.0) throw InvalidParameter("sigma must be >= 0");
    double signal = 0.0;
    for (Eigen::Index k = 0; k < A.cols(); ++k) signal += A.col(k).norm();
    if (signal == 0.0) throw InvalidParameter("loading matrix has zero signal mass");
    return signal / (signal + sigma * expected_norm_std_normal(d));
}

long long effective_sample_size(double snr_value, std::size_t extreme_count) {
    return std::llround(snr_value * static_cast<double>(extreme_count));
}

Matching match_atoms(const Eigen::MatrixXd& estimated, const Eigen::MatrixXd& truth,
                     bool allow_truncate) {
    if (estimated.cols() != truth.cols())
        throw InvalidParameter("atom dimensions differ");
    if (estimated.rows() == truth.rows()) return best_matching(estimated, truth);
    if (estimated.rows() < truth.rows() || !allow_truncate)
        throw InvalidParameter("atom counts differ (pass allow_truncate to drop spares)");

    // Rectangular case: each truth atom takes a distinct estimated atom.
    Eigen::MatrixXd cost(truth.rows(), estimated.rows());
    for (Eigen::Index j = 0; j < truth.rows(); ++j)
        for (Eigen::Index i = 0; i < estimated.rows(); ++i)
            cost(j, i) = (estimated.row(i) - truth.row(j)).squaredNorm();
    Matching m;
    m.permutation = min_cost_assignment(cost);
    double total = 0.0;
    for (Eigen::Index ji = 0; ji < truth.rows(); ++ji)
        total += cost(ji, static_cast<Eigen::Index>(m.permutation[static_cast<std::size_t>(ji)]));
    m.frobenius_error = std::sqrt(total);
    return m;
}

double center_error(const Eigen::MatrixXd& estimated, const AngularMeasure& truth,
                    bool allow_truncate) {
    return match_atoms(estimated, truth.atoms, allow_truncate).frobenius_error;
}

double center_error(const AngularMeasure& estimated, const AngularMeasure& truth,
                    bool allow_truncate) {
    return match_atoms(estimated.atoms, truth.atoms, allow_truncate).frobenius_error;
}

} // namespace xsc
