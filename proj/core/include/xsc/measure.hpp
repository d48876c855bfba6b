#pragma once

#include <Eigen/Dense>
#include <cstddef>

#include "xsc/numerics.hpp"
#include "xsc/rng.hpp"
#include "xsc/variates.hpp"

namespace xsc {

/// Discrete angular measure: unit atoms with probability masses, plus the
/// mass of a uniform (noise) component. Masses and continuous_mass sum to 1.
struct AngularMeasure {
    Eigen::MatrixXd atoms;  ///< K x d unit rows
    Eigen::VectorXd masses; ///< K, nonnegative
    double continuous_mass = 0.0;

    double total_mass() const { return masses.sum() + continuous_mass; }
};

/// Angular measure of X = A Z with iid heavy-tailed factors: atom at each
/// normalized column with mass ||a_k||^alpha / w, w = sum ||a_k||^alpha.
/// The symmetric case doubles the atoms (+-) at half mass. Columns parallel
/// within 1e-10 merge into one atom with summed mass.
AngularMeasure lfm_angular_measure(const Eigen::MatrixXd& A, double alpha, TailCase tail_case);

/// Angular measure of the noisy model X = A Z + sigma eta N at alpha = 1:
/// the signal atoms plus a uniform sphere component of mass
/// sigma E||N|| / (sum ||a_k|| + sigma E||N||).
AngularMeasure noisy_lfm_angular_measure(const Eigen::MatrixXd& A, double sigma, std::size_t d);

/// Angular measure of the lag-embedded moving average (symmetric case of the
/// banded loading matrix).
AngularMeasure ma_angular_measure(const Eigen::VectorXd& coeffs, double alpha,
                                  std::size_t embed_dim);

/// Samples from the limiting law of the scaled angular deviations
/// u (X/||X|| - c_j) around atom j, conditional on a radius exceedance driven
/// by factor j. Each draw combines an independent Pareto(alpha) radius factor
/// with fresh factors for the other columns. Rows satisfy the exact linear
/// constraint a_j . row = 0. `factor` is the 0-based column index.
Eigen::MatrixXd limit_deviation_sampler(const Eigen::MatrixXd& A, double alpha,
                                        std::size_t factor, FactorLaw law, std::size_t count,
                                        RandomStream& stream);

/// Observed scaled deviations u (X_i/||X_i|| - c_j) over the rows with
/// ||X_i|| > u and Z_ij > u / w^{1/alpha}. May be empty.
Eigen::MatrixXd empirical_deviations(const SampleMatrix& sample, const Eigen::MatrixXd& A,
                                     double alpha, double threshold, std::size_t factor);

/// Fraction of angular mass carried by the factor signal in the noisy model
/// (alpha = 1): sum ||a_k|| / (sum ||a_k|| + sigma E||N||).
double snr(const Eigen::MatrixXd& A, double sigma, std::size_t d);

/// Expected number of signal-attributed extremes: snr * N, nearest integer.
long long effective_sample_size(double snr_value, std::size_t extreme_count);

/// Matching of estimated atoms to true atoms (rows may exceed truth rows only
/// with allow_truncate, in which case the spares are ignored).
Matching match_atoms(const Eigen::MatrixXd& estimated, const Eigen::MatrixXd& truth,
                     bool allow_truncate = false);

/// Frobenius norm of the matched difference between estimated atoms and the
/// atoms of the true measure.
double center_error(const Eigen::MatrixXd& estimated, const AngularMeasure& truth,
                    bool allow_truncate = false);
double center_error(const AngularMeasure& estimated, const AngularMeasure& truth,
                    bool allow_truncate = false);

} // namespace xsc
