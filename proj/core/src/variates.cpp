#include "xsc/variates.hpp"

#include <cmath>
#include <numbers>

#include "xsc/errors.hpp"

namespace xsc {

namespace {

void require_count(std::size_t count) {
    if (count < 1) throw InvalidParameter("count must be >= 1");
}

void require_alpha(double alpha) {
    if (!(alpha > 0.0)) throw InvalidParameter("tail index alpha must be > 0");
}

double stable_variate(RandomStream& stream, double alpha) {
    // Chambers-Mallows-Stuck, symmetric case.
    const double theta = std::numbers::pi * (stream.next_open01() - 0.5);
    const double w = -std::log(stream.next_open01()); // Exp(1)
    if (alpha == 1.0) return std::tan(theta);
    const double a = std::sin(alpha * theta) / std::pow(std::cos(theta), 1.0 / alpha);
    const double b = std::pow(std::cos((1.0 - alpha) * theta) / w, (1.0 - alpha) / alpha);
    return a * b;
}

} // namespace

void FactorModelSpec::validate() const {
    if (loadings.size() == 0) throw InvalidParameter("loading matrix is empty");
    require_alpha(alpha);
    if (sigma < 0.0) throw InvalidParameter("sigma must be >= 0");
    for (Eigen::Index j = 0; j < loadings.cols(); ++j) {
        if (loadings.col(j).norm() == 0.0)
            throw InvalidParameter("loading column " + std::to_string(j) + " has zero norm");
    }
    if (tail_case == TailCase::nonnegative) {
        if ((loadings.array() < 0.0).any())
            throw InvalidParameter("nonnegative case requires A >= 0");
        if (factor_law == FactorLaw::symmetric_stable)
            throw InvalidParameter("nonnegative case requires a nonnegative factor law");
    } else {
        if (factor_law != FactorLaw::symmetric_stable)
            throw InvalidParameter("symmetric case requires a symmetric factor law");
    }
    if (factor_law == FactorLaw::symmetric_stable && !(alpha <= 2.0))
        throw InvalidParameter("stable law requires alpha in (0, 2]");
}

double frechet_quantile(double u, double alpha) {
    return std::pow(-std::log(u), -1.0 / alpha);
}

double pareto_quantile(double u, double alpha) {
    return std::pow(u, -1.0 / alpha);
}

Eigen::VectorXd sample_frechet(RandomStream& stream, double alpha, std::size_t count) {
    require_alpha(alpha);
    require_count(count);
    Eigen::VectorXd out(static_cast<Eigen::Index>(count));
    for (Eigen::Index i = 0; i < out.size(); ++i)
        out[i] = frechet_quantile(stream.next_open01(), alpha);
    return out;
}

Eigen::VectorXd sample_pareto(RandomStream& stream, double alpha, std::size_t count) {
    require_alpha(alpha);
    require_count(count);
    Eigen::VectorXd out(static_cast<Eigen::Index>(count));
    for (Eigen::Index i = 0; i < out.size(); ++i)
        out[i] = pareto_quantile(stream.next_open01(), alpha);
    return out;
}

Eigen::VectorXd sample_sym_stable(RandomStream& stream, double alpha, std::size_t count) {
    if (!(alpha > 0.0) || !(alpha <= 2.0))
        throw InvalidParameter("stable index alpha must be in (0, 2]");
    require_count(count);
    Eigen::VectorXd out(static_cast<Eigen::Index>(count));
    for (Eigen::Index i = 0; i < out.size(); ++i) out[i] = stable_variate(stream, alpha);
    return out;
}

Eigen::VectorXd sample_std_normal(RandomStream& stream, std::size_t count) {
    require_count(count);
    Eigen::VectorXd out(static_cast<Eigen::Index>(count));
    // Box-Muller, pairwise; the spare from an odd count is discarded.
    Eigen::Index i = 0;
    while (i < out.size()) {
        const double r = std::sqrt(-2.0 * std::log(stream.next_open01()));
        const double phi = 2.0 * std::numbers::pi * stream.next_open01();
        out[i++] = r * std::cos(phi);
        if (i < out.size()) out[i++] = r * std::sin(phi);
    }
    return out;
}

double sample_factor(RandomStream& stream, FactorLaw law, double alpha) {
    switch (law) {
        case FactorLaw::frechet: return frechet_quantile(stream.next_open01(), alpha);
        case FactorLaw::pareto: return pareto_quantile(stream.next_open01(), alpha);
        case FactorLaw::symmetric_stable: return stable_variate(stream, alpha);
    }
    throw InvalidParameter("unknown factor law");
}

SampleMatrix simulate_lfm(const FactorModelSpec& spec, std::size_t n, RandomStream& stream) {
    spec.validate();
    require_count(n);
    const Eigen::Index d = spec.loadings.rows();
    const Eigen::Index p = spec.loadings.cols();
    const Eigen::Index rows = static_cast<Eigen::Index>(n);

    SampleMatrix out;
    Eigen::MatrixXd Z(rows, p);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < p; ++j)
            Z(i, j) = sample_factor(stream, spec.factor_law, spec.alpha);
    out.X = Z * spec.loadings.transpose();
    out.Z = std::move(Z);

    if (spec.sigma > 0.0) {
        Eigen::VectorXd eta(rows);
        Eigen::MatrixXd N(rows, d);
        for (Eigen::Index i = 0; i < rows; ++i) {
            eta[i] = frechet_quantile(stream.next_open01(), spec.alpha);
            N.row(i) = sample_std_normal(stream, static_cast<std::size_t>(d)).transpose();
        }
        out.X += spec.sigma * (N.array().colwise() * eta.array()).matrix();
        out.eta = std::move(eta);
        out.N = std::move(N);
    }
    return out;
}

Eigen::MatrixXd ma_loading_matrix(const Eigen::VectorXd& coeffs, std::size_t embed_dim) {
    if (coeffs.size() == 0) throw InvalidParameter("empty coefficient vector");
    if (embed_dim < 2) throw InvalidParameter("embed_dim must be >= 2");
    const Eigen::Index q = coeffs.size() - 1;
    const Eigen::Index e = static_cast<Eigen::Index>(embed_dim);
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(e, q + e);
    for (Eigen::Index r = 0; r < e; ++r)
        for (Eigen::Index k = 0; k <= q; ++k) A(r, r + k) = coeffs[k];
    return A;
}

SampleMatrix simulate_ma_embedding(const Eigen::VectorXd& coeffs, double alpha, std::size_t n,
                                   std::size_t embed_dim, RandomStream& stream) {
    const Eigen::MatrixXd A = ma_loading_matrix(coeffs, embed_dim);
    require_alpha(alpha);
    require_count(n);
    const Eigen::Index p = A.cols(); // q + embed_dim
    const Eigen::Index rows = static_cast<Eigen::Index>(n);

    // One long noise path; row t of the latent matrix is the window
    // (Z_t, Z_{t-1}, ..., Z_{t-p+1}) so that X = Z A^T.
    const Eigen::VectorXd noise =
        sample_sym_stable(stream, alpha, static_cast<std::size_t>(rows + p - 1));
    Eigen::MatrixXd Z(rows, p);
    for (Eigen::Index t = 0; t < rows; ++t)
        for (Eigen::Index j = 0; j < p; ++j) Z(t, j) = noise[t + p - 1 - j];

    SampleMatrix out;
    out.X = Z * A.transpose();
    out.Z = std::move(Z);
    return out;
}

} // namespace xsc
