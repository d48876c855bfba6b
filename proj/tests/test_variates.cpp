#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "oracles.hpp"
#include "xsc/errors.hpp"
#include "xsc/extremal.hpp"
#include "xsc/measure.hpp"
#include "xsc/variates.hpp"

using namespace xsc;

namespace {
Eigen::MatrixXd demo_A() {
    Eigen::MatrixXd A(4, 2);
    A << 0.1, 0.9, 0.2, 0.8, 0.3, 0.7, 0.4, 0.6;
    return A;
}
} // namespace

TEST_CASE("frechet quantile hits the closed-form anchor") {
    CHECK(frechet_quantile(std::exp(-1.0), 1.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(frechet_quantile(std::exp(-1.0), 2.0) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("frechet sample median and tail match the law") {
    RandomStream s(101);
    const Eigen::VectorXd x = sample_frechet(s, 1.0, 1000000);
    std::vector<double> v(x.data(), x.data() + x.size());
    std::sort(v.begin(), v.end());
    CHECK(v[v.size() / 2] == doctest::Approx(1.0 / std::log(2.0)).epsilon(0.01));
    // Survival at z=100 scaled by z approaches 1 for a unit-scale tail.
    const double z = 100.0;
    const double exceed =
        static_cast<double>(std::count_if(v.begin(), v.end(), [&](double t) { return t > z; }));
    CHECK(exceed / x.size() * z == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("pareto transform: endpoint, median, mean") {
    CHECK(pareto_quantile(1.0, 1.0) == 1.0);
    CHECK(pareto_quantile(0.5, 1.0) == doctest::Approx(2.0));
    RandomStream s(102);
    const Eigen::VectorXd x = sample_pareto(s, 2.0, 1000000);
    CHECK((x.array() >= 1.0).all());
    CHECK(x.mean() == doctest::Approx(2.0).epsilon(0.01)); // alpha/(alpha-1)
}

TEST_CASE("stable sampler: gaussian case, symmetry, tail index") {
    RandomStream s(103);
    const Eigen::VectorXd g = sample_sym_stable(s, 2.0, 1000000);
    CHECK(g.squaredNorm() / g.size() == doctest::Approx(2.0).epsilon(0.025));

    const Eigen::VectorXd x = sample_sym_stable(s, 1.8, 1000000);
    const auto positive = (x.array() > 0.0).count();
    const auto negative = (x.array() < 0.0).count();
    CHECK(std::abs(static_cast<double>(positive - negative)) / x.size() < 0.01);

    // Hill oracle on the far tail (the 99% quantile is still pre-asymptotic
    // for alpha this close to 2, so use the top 0.1%).
    std::vector<double> absx(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) absx[static_cast<std::size_t>(i)] = std::abs(x[i]);
    CHECK(oracle::hill_estimate(absx, 1000) == doctest::Approx(1.8).epsilon(0.2 / 1.8));
}

TEST_CASE("stable sampler rejects alpha outside (0,2]") {
    RandomStream s(1);
    CHECK_THROWS_AS((void)sample_sym_stable(s, 2.5, 10), InvalidParameter);
    CHECK_THROWS_AS((void)sample_sym_stable(s, 0.0, 10), InvalidParameter);
    CHECK_THROWS_AS((void)sample_frechet(s, -1.0, 10), InvalidParameter);
    CHECK_THROWS_AS((void)sample_pareto(s, 1.0, 0), InvalidParameter);
}

TEST_CASE("standard normal moments and mean norm in dimension 4") {
    RandomStream s(104);
    const Eigen::VectorXd x = sample_std_normal(s, 1000000);
    CHECK(x.mean() == doctest::Approx(0.0).epsilon(1.0));
    CHECK(std::abs(x.mean()) < 0.005);
    const double var = (x.array() - x.mean()).square().sum() / x.size();
    CHECK(var == doctest::Approx(1.0).epsilon(0.01));

    RandomStream s2(105);
    double norm_sum = 0.0;
    const int reps = 1000000;
    for (int i = 0; i < reps; ++i) norm_sum += sample_std_normal(s2, 4).norm();
    CHECK(norm_sum / reps == doctest::Approx(1.880).epsilon(0.01 / 1.880));
}

TEST_CASE("samplers regularly vary: empirical exceedance ratios") {
    RandomStream s(106);
    auto ratio = [](const Eigen::VectorXd& x, double r) {
        const double hi = static_cast<double>((x.array().abs() > 2.0 * r).count());
        const double lo = static_cast<double>((x.array().abs() > r).count());
        return hi / lo;
    };
    const Eigen::VectorXd f = sample_frechet(s, 1.0, 1000000);
    CHECK(ratio(f, 50.0) == doctest::Approx(0.5).epsilon(0.1)); // 2^-1
    const Eigen::VectorXd p = sample_pareto(s, 2.0, 1000000);
    CHECK(ratio(p, 10.0) == doctest::Approx(0.25).epsilon(0.12)); // 2^-2
    const Eigen::VectorXd t = sample_sym_stable(s, 1.5, 1000000);
    CHECK(ratio(t, 20.0) == doctest::Approx(std::pow(2.0, -1.5)).epsilon(0.15));
}

TEST_CASE("lfm with identity loadings returns the factors") {
    FactorModelSpec spec;
    spec.loadings = Eigen::MatrixXd::Identity(2, 2);
    spec.alpha = 1.0;
    RandomStream s(107);
    const SampleMatrix out = simulate_lfm(spec, 500, s);
    REQUIRE(out.Z.has_value());
    CHECK((out.X - *out.Z).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("noisy lfm rows reconstruct from the retained latents") {
    FactorModelSpec spec;
    spec.loadings = demo_A();
    spec.sigma = 1.0;
    RandomStream s(108);
    const SampleMatrix out = simulate_lfm(spec, 2000, s);
    REQUIRE(out.Z);
    REQUIRE(out.eta);
    REQUIRE(out.N);
    const Eigen::MatrixXd rebuilt =
        *out.Z * spec.loadings.transpose() +
        spec.sigma * (out.N->array().colwise() * out.eta->array()).matrix();
    const double rel = (out.X - rebuilt).norm() / out.X.norm();
    CHECK(rel < 1e-10);
}

TEST_CASE("lfm extremes split between factors per the angular masses") {
    FactorModelSpec spec;
    spec.loadings = demo_A();
    RandomStream s(109);
    const SampleMatrix sample = simulate_lfm(spec, 125000, s);
    const ExtremalSample ext = select_extremes(sample, SelectionRule::top_count(400));
    const FactorAttribution att =
        factor_attribution(sample, ext, attribution_bandwidth(125000, ext.threshold, 1.0),
                           attribution_scale(spec.loadings));
    const double frac2 =
        static_cast<double>(std::count(att.labels.begin(), att.labels.end(), 1)) /
        static_cast<double>(att.labels.size());
    // Oracle: the second atom's angular mass.
    const AngularMeasure truth = lfm_angular_measure(spec.loadings, 1.0, TailCase::nonnegative);
    CHECK(frac2 == doctest::Approx(truth.masses[1]).epsilon(0.05 / truth.masses[1]));
}

TEST_CASE("noise-driven extremes appear at the uniform component's mass") {
    FactorModelSpec spec;
    spec.loadings = demo_A();
    spec.sigma = 1.0;
    RandomStream root(112);
    int noise_driven = 0, total = 0;
    for (int rep = 0; rep < 3; ++rep) {
        RandomStream st = root.substream(rep);
        const SampleMatrix sample = simulate_lfm(spec, 125000, st);
        const ExtremalSample ext = select_extremes(sample, SelectionRule::top_count(400));
        const Eigen::MatrixXd signal = *sample.Z * spec.loadings.transpose();
        for (Eigen::Index i : ext.indices) {
            const double noise_norm = (*sample.eta)[i] * sample.N->row(i).norm();
            if (noise_norm > signal.row(i).norm()) ++noise_driven;
            ++total;
        }
    }
    const AngularMeasure truth = noisy_lfm_angular_measure(spec.loadings, 1.0, 4);
    const double fraction = static_cast<double>(noise_driven) / total;
    CHECK(fraction == doctest::Approx(truth.continuous_mass).epsilon(0.05 / truth.continuous_mass));
    CHECK(truth.continuous_mass == doctest::Approx(0.4766).epsilon(2e-4));
}

TEST_CASE("lfm rejects dimension and sign violations") {
    FactorModelSpec spec;
    spec.loadings = Eigen::MatrixXd::Zero(3, 2); // zero columns
    RandomStream s(1);
    CHECK_THROWS_AS((void)simulate_lfm(spec, 10, s), InvalidParameter);
    spec.loadings = demo_A();
    spec.loadings(0, 0) = -0.1;
    CHECK_THROWS_AS((void)simulate_lfm(spec, 10, s), InvalidParameter);
    spec.loadings = demo_A();
    spec.tail_case = TailCase::symmetric; // frechet is not symmetric
    CHECK_THROWS_AS((void)simulate_lfm(spec, 10, s), InvalidParameter);
}

TEST_CASE("ma embedding: banded loadings and overlapping rows") {
    Eigen::VectorXd one(1);
    one << 1.0;
    CHECK(ma_loading_matrix(one, 2) == Eigen::MatrixXd::Identity(2, 2));

    Eigen::VectorXd coeffs(4);
    coeffs << 1.0, 0.5, -0.6, 1.5;
    const Eigen::MatrixXd A = ma_loading_matrix(coeffs, 2);
    REQUIRE(A.rows() == 2);
    REQUIRE(A.cols() == 5);
    CHECK(A(0, 0) == 1.0);
    CHECK(A(0, 3) == 1.5);
    CHECK(A(1, 0) == 0.0);
    CHECK(A(1, 4) == 1.5);

    RandomStream s(110);
    const SampleMatrix out = simulate_ma_embedding(coeffs, 1.8, 300, 4, s);
    REQUIRE(out.X.cols() == 4);
    for (Eigen::Index t = 1; t < out.X.rows(); ++t)
        for (Eigen::Index c = 1; c < 4; ++c)
            CHECK(out.X(t, c) == doctest::Approx(out.X(t - 1, c - 1)).epsilon(1e-15));
    // rows reconstruct from the latent window
    REQUIRE(out.Z);
    const Eigen::MatrixXd A4 = ma_loading_matrix(coeffs, 4);
    CHECK((out.X - *out.Z * A4.transpose()).cwiseAbs().maxCoeff() < 1e-12);

    Eigen::VectorXd empty;
    RandomStream s2(1);
    CHECK_THROWS_AS((void)simulate_ma_embedding(empty, 1.8, 10, 2, s2), InvalidParameter);
}

TEST_CASE("simulation is deterministic under a fixed stream") {
    FactorModelSpec spec;
    spec.loadings = demo_A();
    spec.sigma = 2.0;
    RandomStream a(111), b(111);
    const SampleMatrix x = simulate_lfm(spec, 100, a);
    const SampleMatrix y = simulate_lfm(spec, 100, b);
    CHECK((x.X - y.X).cwiseAbs().maxCoeff() == 0.0);
}
