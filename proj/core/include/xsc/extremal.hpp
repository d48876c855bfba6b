#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

#include "xsc/variates.hpp"

namespace xsc {

/// Radial threshold exceedances of a sample: retained row indices, their
/// radii, and the angular parts on the unit sphere.
struct ExtremalSample {
    double threshold = 0.0;            ///< radial threshold u
    std::vector<Eigen::Index> indices; ///< original row indices, ascending
    Eigen::VectorXd radii;             ///< norms of the retained rows, all > threshold
    Eigen::MatrixXd angles;            ///< count() x d unit vectors
    std::size_t sample_size = 0;       ///< rows in the original sample

    std::size_t count() const { return indices.size(); }
};

/// Threshold rule: keep rows above the beta empirical radius quantile, or
/// keep the top_count largest radii.
struct SelectionRule {
    static SelectionRule quantile(double beta);
    static SelectionRule top_count(std::size_t count);

    bool is_quantile = true;
    double beta = 0.0;
    std::size_t n_top = 0;
};

/// Column-wise rank standardization y = 1/(1 - rank/(n+1)); ranks break ties
/// by original row order, so the output marginals all live on
/// {(n+1)/n, ..., n+1} and any strictly increasing column transform of the
/// input leaves the output unchanged. Latents pass through untouched.
SampleMatrix marginal_rank_transform(const SampleMatrix& sample);

/// Select the extremal part of the sample. Quantile rule: threshold is the
/// order statistic at ceil(beta*n) (beta = 0 keeps every nonzero-radius row).
/// Top-count rule: threshold is the (count+1)-th largest radius; equal radii
/// keep the lower original index first and the result is truncated to the
/// requested count. Retained radii strictly exceed the threshold; zero-radius
/// rows never enter the angular sample.
ExtremalSample select_extremes(const SampleMatrix& sample, const SelectionRule& rule);

/// Midpoint gamma of the admissible interval
/// ((alpha+2)/(alpha(alpha+3)), 1/alpha); thresholds u_n = n^gamma then grow
/// fast enough for factor attribution yet slow enough to retain extremes.
double default_threshold_exponent(double alpha);

/// Bandwidth h = u^{(alpha-1)/4} n^{(2-alpha)/(4 alpha)} that separates the
/// dominant factor of an exceedance from the remaining ones.
double attribution_bandwidth(std::size_t n, double u, double alpha);

/// d^{1/2} max_ij A_ij: scale constant relating the radius threshold to the
/// per-factor threshold.
double attribution_scale(const Eigen::MatrixXd& loadings);

/// Per-extreme factor attribution for simulated data with retained latents.
struct FactorAttribution {
    /// For each extreme: the single factor j with Z_ij > u/a_star, or -1 when
    /// no factor or more than one qualifies.
    std::vector<int> labels;
    /// True when no extreme has two or more factors above the bandwidth.
    bool unambiguous = true;
    double a_star = 0.0;
    double bandwidth = 0.0;
};

FactorAttribution factor_attribution(const SampleMatrix& sample, const ExtremalSample& extremes,
                                     double bandwidth, double a_star);

} // namespace xsc
