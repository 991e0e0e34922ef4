#include <gtest/gtest.h>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <numbers>

#include "mdlcomp/optimize.hpp"
#include "mdlcomp/oracle.hpp"
#include "support.hpp"

using namespace mdlcomp;
using testing_support::gaussian_matrix;
using testing_support::gaussian_vector;
using testing_support::rel_diff;

namespace {

/// A square decomposition with the given spectrum and rotated truth.
SpectralDecomposition synthetic(const Vector& rho, const Vector& w) {
    const Eigen::Index d = rho.size();
    SpectralDecomposition dec;
    dec.eigenvectors = Matrix::Identity(d, d);
    dec.eigenvalues = rho;
    dec.left_vectors = Matrix::Identity(d, d);
    dec.rotated_truth = w;
    dec.samples = d;
    return dec;
}

SpectralDecomposition random_instance(std::mt19937_64& gen, Eigen::Index n, Eigen::Index d) {
    return spectral_decompose(gaussian_matrix(n, d, gen), gaussian_vector(d, gen));
}

}  // namespace

TEST(OracleReport, UnitScalarInstance) {
    const auto r = oracle_complexity_report(synthetic(Vector::Ones(1), Vector::Ones(1)), 1.0);
    EXPECT_NEAR(r.lambda_opt(0), 1.0, 1e-15);
    EXPECT_NEAR(r.ropt, 0.5 * std::log(2.0), 1e-15);
    EXPECT_NEAR(r.mdl_comp, 0.5 * std::log(2.0), 1e-15);
    EXPECT_NEAR(r.codelength_hyper, 0.0, 1e-15);
    EXPECT_EQ(r.retained, 1);
}

TEST(OracleReport, SymmetricInstance) {
    const double sigma2 = 2.5;
    const auto r = oracle_complexity_report(synthetic(Vector::Ones(4), Vector::Constant(4, std::sqrt(sigma2))), sigma2);
    EXPECT_NEAR(r.mdl_comp, 0.5 * std::log(2.0), 1e-14);
    EXPECT_LT((r.lambda_opt.array() - 1.0).abs().maxCoeff(), 1e-14);
}

TEST(OracleReport, IdentityHoldsOnRandomInstances) {
    std::mt19937_64 gen(1);
    std::uniform_int_distribution<int> dim(1, 20);
    for (int trial = 0; trial < 60; ++trial) {
        const double sigma2 = std::vector<double>{0.01, 0.25, 1.0, 4.0}[trial % 4];
        const auto dec = random_instance(gen, dim(gen), dim(gen));
        const auto r = oracle_complexity_report(dec, sigma2);
        EXPECT_NEAR(r.mdl_comp - r.ropt - r.codelength_hyper / static_cast<double>(dec.samples), 0.0, 1e-10);
        EXPECT_GE(r.ropt, 0.0);
        EXPECT_EQ(r.retained + r.excluded, dec.coordinates());
        for (Eigen::Index i = 0; i < dec.coordinates(); ++i) {
            const double w = dec.truth_coordinate(i);
            EXPECT_LT(rel_diff(r.lambda_opt(i), sigma2 / (w * w)), 1e-12);
        }
    }
}

TEST(OracleReport, RoptMatchesGridMinimizedKl) {
    std::mt19937_64 gen(2);
    const auto dec = random_instance(gen, 5, 3);
    const double sigma2 = 0.25;
    const auto r = oracle_complexity_report(dec, sigma2);
    // Brute-force each coordinate on a dense grid then polish.
    Vector best(3);
    for (Eigen::Index i = 0; i < 3; ++i) {
        const double rho = dec.eigenvalues(i), w = dec.truth_coordinate(i);
        const auto f = [&](double l) { return kl_coordinate_term(rho, w * w / sigma2, l); };
        double arg = 0.0, val = INFINITY;
        for (double l : testing_support::geometric(1e-8, 1e8, 4001))
            if (f(l) < val) val = f(l), arg = l;
        best(i) = testing_support::golden_log_argmin(f, arg / 1.1, arg * 1.1);
    }
    const double brute = kl_ridge_code(dec, sigma2, PenaltySpec::per_coordinate(best));
    EXPECT_LT(rel_diff(brute, r.ropt), 1e-6);
}

TEST(OracleReport, ExclusionAndDegenerateCases) {
    Vector w(3);
    w << 1.0, 0.0, 1e-9;
    const auto r = oracle_complexity_report(synthetic(Vector::Ones(3), w), 1.0);
    EXPECT_EQ(r.retained, 1);
    EXPECT_EQ(r.excluded, 2);
    EXPECT_TRUE(std::isinf(r.lambda_opt(1)));
    EXPECT_NEAR(r.ropt, std::log(2.0) / 6.0, 1e-15);

    const auto zero = oracle_complexity_report(synthetic(Vector::Ones(2), Vector::Zero(2)), 1.0);
    EXPECT_TRUE(zero.degenerate);
    EXPECT_EQ(zero.ropt, 0.0);
    EXPECT_EQ(zero.mdl_comp, 0.0);

    EXPECT_THROW(oracle_complexity_report(spectral_decompose(Matrix::Ones(2, 2)), 1.0), InputError);
    EXPECT_THROW(oracle_complexity_report(synthetic(Vector::Ones(1), Vector::Ones(1)), 0.0), InputError);
}

TEST(OracleReport, MdlCompNondecreasingInEigenvalues) {
    std::mt19937_64 gen(3);
    for (int trial = 0; trial < 20; ++trial) {
        const auto dec = random_instance(gen, 8, 6);
        const double base = oracle_complexity_report(dec, 0.5).mdl_comp;
        for (Eigen::Index i = 0; i < 6; ++i) {
            auto bumped = dec;
            bumped.eigenvalues(i) *= 1.5;
            EXPECT_GE(oracle_complexity_report(bumped, 0.5).mdl_comp, base - 1e-15);
        }
    }
}

TEST(KlRidgeCode, EqualsRoptAtOptimum) {
    std::mt19937_64 gen(4);
    for (int trial = 0; trial < 20; ++trial) {
        const auto dec = random_instance(gen, 3 + trial % 7, 2 + trial % 5);
        const auto r = oracle_complexity_report(dec, 1.3);
        EXPECT_NEAR(kl_ridge_code(dec, 1.3, PenaltySpec::per_coordinate(r.lambda_opt)), r.ropt,
                    1e-12 * std::max(1.0, r.ropt));
    }
}

TEST(KlRidgeCode, InfinitePenaltyLimit) {
    const auto dec = synthetic(Vector::Ones(1), Vector::Ones(1));
    EXPECT_NEAR(kl_coordinate_term(1.0, 1.0, 1e18), 2.0, 1e-12);
    EXPECT_NEAR(kl_ridge_code(dec, 1.0, PenaltySpec::scalar(1e18)), 0.5, 1e-12);
    EXPECT_EQ(kl_coordinate_term(1.0, 1.0, INFINITY), 2.0);
    EXPECT_TRUE(std::isinf(kl_ridge_code(dec, 1.0, PenaltySpec::ols())));
}

TEST(KlRidgeCode, NeverBelowRopt) {
    std::mt19937_64 gen(5);
    for (int trial = 0; trial < 10; ++trial) {
        const auto dec = random_instance(gen, 7, 4);
        const double ropt = oracle_complexity_report(dec, 0.8).ropt;
        std::uniform_real_distribution<double> log_lambda(-6.0, 6.0);
        for (int k = 0; k < 200; ++k) {
            Vector lambdas(4);
            for (Eigen::Index i = 0; i < 4; ++i) lambdas(i) = std::exp(log_lambda(gen));
            EXPECT_GE(kl_ridge_code(dec, 0.8, PenaltySpec::per_coordinate(lambdas)), ropt - 1e-12);
        }
    }
}

TEST(InsampleMse, Limits) {
    std::mt19937_64 gen(6);
    const auto dec = random_instance(gen, 9, 4);
    const double sigma2 = 0.7;
    EXPECT_NEAR(insample_mse_analytic(dec, sigma2, PenaltySpec::ols()), 4 * sigma2 / 9, 1e-14);
    double signal = 0.0;
    for (Eigen::Index i = 0; i < 4; ++i) signal += dec.eigenvalues(i) * std::pow(dec.truth_coordinate(i), 2);
    EXPECT_NEAR(insample_mse_analytic(dec, sigma2, PenaltySpec::scalar(1e15)), signal / 9, 1e-9 * signal);

    const auto r = oracle_complexity_report(dec, sigma2);
    double optimum = 0.0;
    for (Eigen::Index i = 0; i < 4; ++i) {
        const double a = dec.eigenvalues(i) * std::pow(dec.truth_coordinate(i), 2);
        optimum += a * sigma2 / (a + sigma2);
    }
    EXPECT_NEAR(insample_mse_analytic(dec, sigma2, PenaltySpec::per_coordinate(r.lambda_opt)), optimum / 9,
                1e-12);
}

TEST(InsampleBound, Examples) {
    const auto unit = synthetic(Vector::Ones(1), Vector::Ones(1));
    EXPECT_NEAR(insample_bound(unit, 1.0), std::log(2.0), 1e-15);
    EXPECT_NEAR(insample_mse_analytic(unit, 1.0, PenaltySpec::scalar(1.0)), 0.5, 1e-15);
    const auto zero = synthetic(Vector::Ones(2), Vector::Zero(2));
    EXPECT_EQ(insample_bound(zero, 1.0), 0.0);
    EXPECT_EQ(insample_mse_analytic(zero, 1.0, PenaltySpec::scalar(1e300)), 0.0);
    EXPECT_NEAR(insample_bound_scaled_ropt(unit, 2.0), 2.0 * oracle_complexity_report(unit, 2.0).ropt, 1e-15);
}

TEST(InsampleBound, DominatesGridMinimum) {
    std::mt19937_64 gen(7);
    std::uniform_int_distribution<int> dim(1, 20);
    const auto grid = testing_support::geometric(1e-6, 1e6, 500);
    for (int trial = 0; trial < 30; ++trial) {
        const auto dec = random_instance(gen, dim(gen), dim(gen));
        const double sigma2 = 0.5;
        double best = INFINITY;
        for (double l : grid) best = std::min(best, insample_mse_analytic(dec, sigma2, PenaltySpec::scalar(l)));
        EXPECT_GE(insample_bound(dec, sigma2), best);
    }
}

TEST(Minimax, ToyValueAndConstantShift) {
    const auto unit = synthetic(Vector::Ones(1), Vector::Ones(1));
    EXPECT_NEAR(minimax_worstcase_codelength(unit, 1.0, PenaltySpec::scalar(1.0)), 0.5 + 0.5 * std::log(2.0),
                1e-15);

    std::mt19937_64 gen(8);
    const auto dec = random_instance(gen, 9, 5);
    const double n = 9, m = 5;
    std::vector<double> shifts;
    for (double l : {0.01, 0.3, 1.0, 7.0, 200.0}) {
        const PenaltySpec p = PenaltySpec::scalar(l);
        shifts.push_back(minimax_worstcase_codelength(dec, 1.1, p) - (n * kl_ridge_code(dec, 1.1, p) + m / 2));
    }
    for (double s : shifts) EXPECT_NEAR(s, shifts.front(), 1e-10);
}

TEST(Minimax, PerCoordinateArgminIsOptimalPenalty) {
    std::mt19937_64 gen(9);
    const auto dec = random_instance(gen, 6, 4);
    const double sigma2 = 0.6;
    const auto r = oracle_complexity_report(dec, sigma2);
    const auto grid = testing_support::geometric(1e-5, 1e5, 500);
    const double step = std::log(grid[1] / grid[0]);
    for (Eigen::Index i = 0; i < 4; ++i) {
        Vector lambdas = r.lambda_opt;
        double arg = 0.0, best = INFINITY;
        for (double l : grid) {
            lambdas(i) = l;
            const double v = minimax_worstcase_codelength(dec, sigma2, PenaltySpec::per_coordinate(lambdas));
            if (v < best) best = v, arg = l;
        }
        EXPECT_LE(std::abs(std::log(arg / r.lambda_opt(i))), step);
    }
}

TEST(LnmlNormalizer, MatchesLogDeterminant) {
    std::mt19937_64 gen(10);
    for (int trial = 0; trial < 10; ++trial) {
        const Eigen::Index n = 2 + trial % 4, d = 1 + trial % 6;
        const Matrix x = gaussian_matrix(n, d, gen);
        const auto dec = spectral_decompose(x);
        Vector lambdas(d);
        for (Eigen::Index i = 0; i < d; ++i) lambdas(i) = 0.3 + i;
        const Matrix penalty = dec.eigenvectors * lambdas.asDiagonal() * dec.eigenvectors.transpose();
        const Matrix a = Matrix::Identity(n, n) - x * (x.transpose() * x + penalty).inverse() * x.transpose();
        const double oracle = -0.5 * std::log(a.determinant());
        EXPECT_LT(rel_diff(lnml_log_normalizer(dec, PenaltySpec::per_coordinate(lambdas)), oracle), 1e-9);
    }
}

TEST(ScalingApproximation, DocumentedBranches) {
    ScalingRegimeInput in{.d = 500, .n = 200, .true_dim = 60, .signal_energy = 1.0, .noise_variance = 1.0};
    EXPECT_NEAR(scaling_approximation(in, ScalingQuantity::ropt), std::log1p(1.0 / 200), 1e-15);
    in.d = 5000;
    EXPECT_NEAR(scaling_approximation(in, ScalingQuantity::ropt), std::log1p(1.0 / 200), 1e-15);
    in.d = 100;
    EXPECT_NEAR(scaling_approximation(in, ScalingQuantity::mdl_comp), 0.5 * std::log1p(100.0), 1e-15);
    in.d = 30;
    EXPECT_NEAR(scaling_approximation(in, ScalingQuantity::mdl_comp), 0.15 * std::log1p(60.0), 1e-15);
    EXPECT_NEAR(scaling_approximation(in, ScalingQuantity::ropt), 0.15 * std::log1p(1.0 / 60), 1e-15);
}

TEST(ScalingApproximation, SignalEnteredAsRatioToNoise) {
    ScalingRegimeInput a{.d = 80, .n = 200, .true_dim = 60, .signal_energy = 2.0, .noise_variance = 0.5};
    ScalingRegimeInput b{.d = 80, .n = 200, .true_dim = 60, .signal_energy = 4.0, .noise_variance = 1.0};
    for (auto q : {ScalingQuantity::mdl_comp, ScalingQuantity::ropt})
        EXPECT_DOUBLE_EQ(scaling_approximation(a, q), scaling_approximation(b, q));
    EXPECT_THROW(scaling_approximation(ScalingRegimeInput{.d = 0}, ScalingQuantity::ropt), InputError);
}

TEST(ScalingApproximation, BoundaryRecorded) {
    // d = d* = n: both neighbouring branches are finite; no agreement is asserted.
    ScalingRegimeInput in{.d = 200, .n = 200, .true_dim = 200, .signal_energy = 1.0, .noise_variance = 1.0};
    EXPECT_TRUE(std::isfinite(scaling_approximation(in, ScalingQuantity::mdl_comp)));
    EXPECT_TRUE(std::isfinite(scaling_approximation(in, ScalingQuantity::ropt)));
}

TEST(Rmt, Examples) {
    EXPECT_EQ(rmt_redundancy_bound(RmtSpec{1.0, 0.0}), 0.0);
    const double delta = std::pow(std::sqrt(13.0) - 1.0, 2) / 4.0;
    EXPECT_NEAR(rmt_delta(RmtSpec{1.0, 3.0}), delta, 1e-12);
    const double expected = std::log(4.0 - delta) * 2.0 - delta / 3.0;
    EXPECT_NEAR(rmt_redundancy_bound(RmtSpec{1.0, 3.0}), expected, 1e-12);
    EXPECT_NEAR(rmt_redundancy_bound(RmtSpec{1.0, 3.0}), 1.1025, 5e-5);
    EXPECT_THROW(rmt_redundancy_bound(RmtSpec{-1.0, 1.0}), InputError);
    EXPECT_THROW(rmt_redundancy_bound(RmtSpec{1.0, -1.0}), InputError);
}

TEST(Rmt, SmallSnrIsContinuous) {
    // The bound vanishes like gamma * snr as snr -> 0.
    for (double g : {0.3, 1.0, 2.5}) {
        EXPECT_NEAR(rmt_redundancy_bound(RmtSpec{g, 1e-12}) / (g * 1e-12), 1.0, 1e-6);
        EXPECT_GT(rmt_redundancy_bound(RmtSpec{g, 1e-3}), 0.0);
    }
}

TEST(MarchenkoPastur, DensityExamples) {
    EXPECT_NEAR(mp_density(2.0, 1.0), 1.0 / (2.0 * std::numbers::pi), 1e-15);
    EXPECT_EQ(mp_density(5.0, 1.0), 0.0);
    EXPECT_EQ(mp_density(0.0, 0.5), 0.0);
    const auto [b1, b2] = mp_support(0.5);
    EXPECT_EQ(mp_density(b1 * 0.99, 0.5), 0.0);
    EXPECT_EQ(mp_density(b2 * 1.01, 0.5), 0.0);
    EXPECT_EQ(mp_point_mass(0.5), 0.0);
    EXPECT_NEAR(mp_point_mass(4.0), 0.75, 1e-15);
}

TEST(MarchenkoPastur, QuadratureNormalization) {
    boost::math::quadrature::tanh_sinh<double> integrator;
    for (double g : {0.25, 0.5, 0.9, 1.0, 2.0, 4.0}) {
        const auto [b1, b2] = mp_support(g);
        const double mass = integrator.integrate([g](double a) { return mp_density(a, g); }, b1, b2);
        EXPECT_NEAR(mass, std::min(1.0, 1.0 / g), 1e-6) << "gamma " << g;
        EXPECT_NEAR(mass + mp_point_mass(g), 1.0, 1e-6);
    }
}
