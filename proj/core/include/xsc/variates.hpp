#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <optional>

#include "xsc/rng.hpp"

namespace xsc {

enum class FactorLaw { frechet, pareto, symmetric_stable };
enum class TailCase { nonnegative, symmetric };

/// Linear factor model X = A Z + sigma * eps, with eps_i = eta_i * N_i
/// (scalar Frechet eta times a vector of iid standard normals).
struct FactorModelSpec {
    Eigen::MatrixXd loadings;                      ///< d x p, columns nonzero
    double alpha = 1.0;                            ///< tail index of the factors
    double sigma = 0.0;                            ///< noise scale, >= 0
    FactorLaw factor_law = FactorLaw::frechet;
    TailCase tail_case = TailCase::nonnegative;

    /// Throws InvalidParameter on any violated constraint (zero column,
    /// nonpositive alpha, negative sigma, sign-incompatible law/case).
    void validate() const;
};

/// Observations with optional simulation-time latents retained.
/// When all latents are present, X = Z A^T + sigma * (N rowwise-scaled by eta).
struct SampleMatrix {
    Eigen::MatrixXd X;                  ///< n x d observations
    std::optional<Eigen::MatrixXd> Z;   ///< n x p latent factors
    std::optional<Eigen::VectorXd> eta; ///< n, Frechet noise multipliers
    std::optional<Eigen::MatrixXd> N;   ///< n x d normal noise

    Eigen::Index rows() const { return X.rows(); }
    Eigen::Index cols() const { return X.cols(); }
};

/// Frechet quantile: inverse of F(x) = exp(-x^{-alpha}) on (0,1).
double frechet_quantile(double u, double alpha);

/// Pareto quantile u^{-1/alpha}: inverse-transform draw for
/// P(W > x) = x^{-alpha}, x >= 1. u = 1 maps to the lower endpoint 1.
double pareto_quantile(double u, double alpha);

Eigen::VectorXd sample_frechet(RandomStream& stream, double alpha, std::size_t count);
Eigen::VectorXd sample_pareto(RandomStream& stream, double alpha, std::size_t count);

/// Standard symmetric alpha-stable variates (Chambers-Mallows-Stuck),
/// characteristic function exp(-|t|^alpha); alpha = 2 is N(0, 2).
Eigen::VectorXd sample_sym_stable(RandomStream& stream, double alpha, std::size_t count);

Eigen::VectorXd sample_std_normal(RandomStream& stream, std::size_t count);

/// Draw one variate of the given law (tail index alpha).
double sample_factor(RandomStream& stream, FactorLaw law, double alpha);

/// n iid rows from the factor model. Latents (Z, and eta/N when sigma > 0)
/// are always retained.
SampleMatrix simulate_lfm(const FactorModelSpec& spec, std::size_t n, RandomStream& stream);

/// Banded loading matrix of the lag-embedded moving average:
/// row r carries the coefficients shifted r places. embed_dim x (q + embed_dim)
/// for q + 1 coefficients.
Eigen::MatrixXd ma_loading_matrix(const Eigen::VectorXd& coeffs, std::size_t embed_dim);

/// Lag vectors (Y_t, ..., Y_{t-embed_dim+1}) of the moving average
/// Y_t = sum_k coeffs[k] Z_{t-k} driven by symmetric stable noise.
/// Rows overlap by construction (serially dependent). The latent matrix rows
/// hold the aligned noise window, so X = Z A^T with A = ma_loading_matrix.
SampleMatrix simulate_ma_embedding(const Eigen::VectorXd& coeffs, double alpha, std::size_t n,
                                   std::size_t embed_dim, RandomStream& stream);

} // namespace xsc
