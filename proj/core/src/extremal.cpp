#include "xsc/extremal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "xsc/errors.hpp"

namespace xsc {

SelectionRule SelectionRule::quantile(double beta) {
    if (beta < 0.0 || beta >= 1.0) throw InvalidParameter("quantile beta must be in [0, 1)");
    SelectionRule r;
    r.is_quantile = true;
    r.beta = beta;
    return r;
}

SelectionRule SelectionRule::top_count(std::size_t count) {
    if (count < 1) throw InvalidParameter("top count must be >= 1");
    SelectionRule r;
    r.is_quantile = false;
    r.n_top = count;
    return r;
}

SampleMatrix marginal_rank_transform(const SampleMatrix& sample) {
    const Eigen::Index n = sample.X.rows();
    const Eigen::Index d = sample.X.cols();
    if (n < 2) throw InvalidParameter("rank transform needs at least 2 rows");

    SampleMatrix out = sample;
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    for (Eigen::Index j = 0; j < d; ++j) {
        std::iota(order.begin(), order.end(), Eigen::Index{0});
        // Stable sort keeps ties in original row order.
        std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
            return sample.X(a, j) < sample.X(b, j);
        });
        for (std::size_t pos = 0; pos < order.size(); ++pos) {
            const double rank = static_cast<double>(pos + 1);
            out.X(order[pos], j) = 1.0 / (1.0 - rank / static_cast<double>(n + 1));
        }
    }
    return out;
}

ExtremalSample select_extremes(const SampleMatrix& sample, const SelectionRule& rule) {
    const Eigen::Index n = sample.X.rows();
    if (n < 2) throw InvalidParameter("need at least 2 rows");
    if (!rule.is_quantile && rule.n_top >= static_cast<std::size_t>(n))
        throw InvalidParameter("top count must be < sample size");

    Eigen::VectorXd radii = sample.X.rowwise().norm();
    if ((radii.array() == 0.0).all()) throw DegenerateSample("all radii are zero");

    double threshold = 0.0;
    std::vector<Eigen::Index> keep;
    if (rule.is_quantile) {
        if (rule.beta > 0.0) {
            // Order statistic at ceil(beta*n), 1-based, lower index on ties.
            Eigen::VectorXd sorted = radii;
            std::sort(sorted.data(), sorted.data() + n);
            const auto idx = static_cast<Eigen::Index>(
                std::ceil(rule.beta * static_cast<double>(n)));
            threshold = sorted[std::min(idx, n) - 1];
        }
        for (Eigen::Index i = 0; i < n; ++i)
            if (radii[i] > threshold) keep.push_back(i);
    } else {
        std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
        std::iota(order.begin(), order.end(), Eigen::Index{0});
        std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
            if (radii[a] != radii[b]) return radii[a] > radii[b];
            return a < b;
        });
        threshold = radii[order[rule.n_top]];
        for (std::size_t pos = 0; pos < rule.n_top; ++pos)
            if (radii[order[pos]] > threshold) keep.push_back(order[pos]);
        std::sort(keep.begin(), keep.end());
    }

    ExtremalSample out;
    out.threshold = threshold;
    out.sample_size = static_cast<std::size_t>(n);
    out.indices = std::move(keep);
    const auto m = static_cast<Eigen::Index>(out.indices.size());
    out.radii.resize(m);
    out.angles.resize(m, sample.X.cols());
    for (Eigen::Index r = 0; r < m; ++r) {
        const Eigen::Index i = out.indices[static_cast<std::size_t>(r)];
        out.radii[r] = radii[i];
        out.angles.row(r) = sample.X.row(i) / radii[i];
    }
    return out;
}

double default_threshold_exponent(double alpha) {
    if (!(alpha > 0.0)) throw InvalidParameter("alpha must be > 0");
    const double lower = (alpha + 2.0) / (alpha * (alpha + 3.0));
    const double upper = 1.0 / alpha;
    return 0.5 * (lower + upper);
}

double attribution_bandwidth(std::size_t n, double u, double alpha) {
    if (!(u > 0.0)) throw InvalidParameter("threshold must be > 0");
    if (!(alpha > 0.0)) throw InvalidParameter("alpha must be > 0");
    const double nd = static_cast<double>(n);
    return std::pow(u, (alpha - 1.0) / 4.0) * std::pow(nd, (2.0 - alpha) / (4.0 * alpha));
}

double attribution_scale(const Eigen::MatrixXd& loadings) {
    if (loadings.size() == 0) throw InvalidParameter("empty loading matrix");
    return std::sqrt(static_cast<double>(loadings.rows())) * loadings.maxCoeff();
}

FactorAttribution factor_attribution(const SampleMatrix& sample, const ExtremalSample& extremes,
                                     double bandwidth, double a_star) {
    if (!sample.Z) throw MissingLatents("factor attribution requires retained latents");
    if (!(bandwidth > 0.0)) throw InvalidParameter("bandwidth must be > 0");
    if (!(a_star > 0.0)) throw InvalidParameter("a_star must be > 0");

    const Eigen::MatrixXd& Z = *sample.Z;
    const Eigen::Index p = Z.cols();
    const double factor_threshold = extremes.threshold / a_star;

    FactorAttribution out;
    out.a_star = a_star;
    out.bandwidth = bandwidth;
    out.labels.reserve(extremes.count());
    for (Eigen::Index i : extremes.indices) {
        int label = -1;
        int above_threshold = 0;
        int above_bandwidth = 0;
        for (Eigen::Index j = 0; j < p; ++j) {
            if (Z(i, j) > factor_threshold) {
                ++above_threshold;
                label = static_cast<int>(j);
            }
            if (Z(i, j) > bandwidth) ++above_bandwidth;
        }
        out.labels.push_back(above_threshold == 1 ? label : -1);
        if (above_bandwidth >= 2) out.unambiguous = false;
    }
    return out;
}

} // namespace xsc
