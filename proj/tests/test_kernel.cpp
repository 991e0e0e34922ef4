#include <gtest/gtest.h>

#include <fstream>

#include "mdlcomp/io.hpp"
#include "mdlcomp/kernel.hpp"
#include "support.hpp"

using namespace mdlcomp;
using testing_support::gaussian_matrix;
using testing_support::gaussian_vector;
using testing_support::rel_diff;

namespace {

KernelComplexityInput spectrum_input(const Vector& rho, double snr2) {
    KernelComplexityInput in;
    in.eigenvalues = rho;
    in.hilbert_norm_sq_over_sigma_sq = snr2;
    return in;
}

Matrix random_psd(Eigen::Index n, std::mt19937_64& gen) {
    const Matrix a = gaussian_matrix(n, n, gen);
    return a * a.transpose();
}

}  // namespace

TEST(BuildKernel, RbfDiagonalAndDuplicates) {
    std::mt19937_64 gen(1);
    Matrix pts = gaussian_matrix(6, 3, gen);
    pts.row(4) = pts.row(1);
    const Matrix k = build_kernel(pts, KernelSpec{.kind = KernelSpec::Kind::rbf, .bandwidth = 0.8});
    for (Eigen::Index i = 0; i < 6; ++i) EXPECT_EQ(k(i, i), 1.0);
    EXPECT_EQ(k(1, 4), 1.0);
    const double dist2 = (pts.row(0) - pts.row(2)).squaredNorm();
    EXPECT_NEAR(k(0, 2), std::exp(-dist2 / (2 * 0.64)), 1e-15);
}

TEST(BuildKernel, PolynomialEntriesAndNormalization) {
    std::mt19937_64 gen(2);
    const Matrix pts = gaussian_matrix(5, 2, gen);
    KernelSpec spec{.kind = KernelSpec::Kind::polynomial, .degree = 3, .offset = 0.5};
    const Matrix k = build_kernel(pts, spec);
    EXPECT_NEAR(k(1, 3), std::pow(pts.row(1).dot(pts.row(3)) + 0.5, 3), 1e-12);
    spec.normalize = true;
    EXPECT_NEAR(build_kernel(pts, spec).trace(), 5.0, 1e-10);
}

TEST(BuildKernel, OutputsArePsd) {
    std::mt19937_64 gen(3);
    for (auto kind : {KernelSpec::Kind::rbf, KernelSpec::Kind::polynomial}) {
        const Matrix k = build_kernel(gaussian_matrix(12, 3, gen), KernelSpec{.kind = kind});
        Eigen::SelfAdjointEigenSolver<Matrix> eig(k);
        EXPECT_GE(eig.eigenvalues().minCoeff(), -1e-8 * eig.eigenvalues().maxCoeff());
    }
}

TEST(BuildKernel, PrecomputedFileChecksSymmetry) {
    const auto dir = testing_support::scratch_dir("kernel_file");
    const std::string good = (dir / "good.csv").string(), bad = (dir / "bad.csv").string();
    std::ofstream(good) << "2,1\n1,2\n";
    std::ofstream(bad) << "2,1\n0.5,2\n";
    const Matrix k = build_kernel(Matrix(), KernelSpec{.kind = KernelSpec::Kind::precomputed, .path = good});
    EXPECT_EQ(k(0, 1), 1.0);
    EXPECT_THROW(load_kernel_matrix(bad), InputError);
    EXPECT_THROW(build_kernel(Matrix::Ones(2, 2), KernelSpec{.bandwidth = 0.0}), InputError);
}

TEST(KlKernelCode, Examples) {
    KernelComplexityInput zero = make_kernel_input(Matrix::Identity(3, 3), Vector::Zero(3), 1.0, 0.0);
    EXPECT_NEAR(kl_kernel_code(zero, 1e18), 0.0, 1e-12);

    // K = I with alpha_i^2 = sigma^2 and lambda = 1.
    const double sigma2 = 0.7;
    const KernelComplexityInput in =
        make_kernel_input(Matrix::Identity(2, 2), Vector::Constant(2, std::sqrt(sigma2)), sigma2, 1.0);
    EXPECT_NEAR(kl_kernel_code(in, 1.0), 0.5 * std::log(2.0), 1e-14);
    EXPECT_TRUE(std::isinf(kl_kernel_code(in, 0.0)));
}

TEST(KlKernelCode, MatchesGaussianKlAssembledDirectly) {
    std::mt19937_64 gen(4);
    for (int trial = 0; trial < 5; ++trial) {
        const Matrix k = random_psd(5, gen);
        const Vector f = gaussian_vector(5, gen);
        const double sigma2 = 0.4 + trial, lambda = 0.3;
        const Matrix m = (k + lambda * Matrix::Identity(5, 5)).inverse();
        // KL(N(f, sigma^2 I) || LNML) = -n/2 + log C + lambda E[y^T M y] / (2 sigma^2).
        const double log_c = -0.5 * std::log((lambda * m).determinant());
        const double quad = lambda * (f.dot(m * f) + sigma2 * m.trace()) / (2 * sigma2);
        const double oracle = (-2.5 + log_c + quad) / 5.0;
        EXPECT_LT(rel_diff(kl_kernel_code(make_kernel_input(k, f, sigma2, 1.0), lambda), oracle), 1e-9);
    }
}

TEST(KlKernelCode, ProofChainInequalities) {
    // With ||f||_H^2 >= f^T K^+ f, the data term lambda sum alpha_i^2 / (lambda + rho_i) / sigma^2 is
    // bounded by lambda SNR^2, so the exact KL never exceeds the bound objective.
    std::mt19937_64 gen(5);
    for (int trial = 0; trial < 10; ++trial) {
        const Matrix k = random_psd(6, gen) + 0.1 * Matrix::Identity(6, 6);
        const Vector coef = gaussian_vector(6, gen);
        const Vector f = k * coef;  // f lies in the span of the kernel sections
        const double sigma2 = 0.5;
        const double snr2 = coef.dot(k * coef) / sigma2;
        const auto in = make_kernel_input(k, f, sigma2, snr2);
        for (double lambda : {0.01, 0.3, 2.0, 50.0}) {
            double data = 0.0, trace = 0.0;
            for (Eigen::Index i = 0; i < 6; ++i) {
                const double rho = in.eigenvalues(i), a = (*in.rotated_truth)(i);
                data += lambda * a * a / (lambda + rho) / sigma2;
                trace += lambda / (lambda + rho);
            }
            EXPECT_LE(data, lambda * snr2 * (1 + 1e-10));
            EXPECT_LE(trace, 6.0);
            EXPECT_LE(kl_kernel_code(in, lambda), kernel_bound_objective(in, lambda) + 1e-12);
        }
    }
}

TEST(KernelBound, ToyStationaryPoint) {
    const auto b = kernel_mdl_bound(spectrum_input(Vector::Ones(1), 1.0));
    EXPECT_NEAR(b.lambda, (std::sqrt(5.0) - 1.0) / 2.0, 1e-6);
    EXPECT_NEAR(b.value, 0.7902, 5e-5);
    double best = INFINITY;
    for (double l : testing_support::geometric(1e-3, 1e3, 10000))
        best = std::min(best, kernel_bound_objective(spectrum_input(Vector::Ones(1), 1.0), l));
    EXPECT_LE(b.value, best + 1e-12);
}

TEST(KernelBound, DegenerateSpectra) {
    const auto zero = kernel_mdl_bound(spectrum_input(Vector::Zero(3), 1.0));
    EXPECT_EQ(zero.value, 0.0);
    EXPECT_EQ(zero.lambda, 1e-8);
    EXPECT_EQ(kernel_mdl_bound(spectrum_input(Vector::Ones(3), 0.0)).value, 0.0);
    EXPECT_THROW(kernel_mdl_bound(spectrum_input(Vector::Ones(3), -1.0)), InputError);
}

TEST(KernelBound, MonotoneInSnrAndPermutationInvariant) {
    std::mt19937_64 gen(6);
    const Vector rho = polynomial_decay_eigenvalues(1.0, 40);
    double previous_value = 0.0, previous_lambda = INFINITY;
    for (double snr2 : {0.5, 1.0, 2.0, 4.0, 8.0}) {
        const auto b = kernel_mdl_bound(spectrum_input(rho, snr2));
        EXPECT_GE(b.value, previous_value);
        EXPECT_LE(b.lambda, previous_lambda * (1 + 1e-6));
        previous_value = b.value;
        previous_lambda = b.lambda;
    }
    Vector shuffled = rho;
    std::shuffle(shuffled.begin(), shuffled.end(), gen);
    EXPECT_NEAR(kernel_mdl_bound(spectrum_input(shuffled, 2.0)).value,
                kernel_mdl_bound(spectrum_input(rho, 2.0)).value, 1e-12);
}

TEST(DecayRegime, SobolevConstantAndExponent) {
    const double snr = 1.7, n = 5000;
    const DecayRegime r{.kind = DecayRegime::Kind::sobolev, .dim = 1, .omega = 2, .snr = snr, .n = n};
    EXPECT_DOUBLE_EQ(r.alpha(), 2.0);
    EXPECT_NEAR(decay_constant(2.0, snr), std::pow(2.0, 0.8) * std::pow(snr, 0.4), 1e-14);
    const double expected = std::pow(2.0, 0.8) * std::pow(snr, 0.4) * std::pow(std::log(n * snr * snr) / n, 0.8);
    EXPECT_NEAR(decay_regime_bound(r), expected, 1e-14);
}

TEST(DecayRegime, NtkAndGaussianForms) {
    const double n = 1000;
    const DecayRegime ntk{.kind = DecayRegime::Kind::ntk_like, .dim = 3, .a = 0, .snr = 1, .n = n};
    EXPECT_NEAR(decay_regime_bound(ntk), decay_constant(1.5, 1.0) * std::pow(std::log(n) / n, 0.75), 1e-14);
    const DecayRegime gauss{.kind = DecayRegime::Kind::gaussian_like, .dim = 2, .snr = 1, .n = n};
    EXPECT_NEAR(decay_regime_bound(gauss), 2 * std::pow(std::log(2 * n), 2) / n, 1e-14);
}

TEST(DecayRegime, ConstraintsEnforced) {
    EXPECT_THROW(decay_regime_bound(DecayRegime{.kind = DecayRegime::Kind::sobolev, .dim = 4, .omega = 2}),
                 InputError);
    EXPECT_THROW(decay_regime_bound(DecayRegime{.kind = DecayRegime::Kind::ntk_like, .dim = 1, .a = 0}),
                 InputError);
}

TEST(DecayEigenvalues, FiniteSumNormalizer) {
    const Vector rho = polynomial_decay_eigenvalues(1.0, 4);
    const double c = 1 + 0.25 + 1.0 / 9 + 1.0 / 16;
    EXPECT_NEAR(decay_normalizer(1.0, 4), c, 1e-15);
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(rho(i), c * 4 * std::pow(i + 1.0, -2.0), 1e-14);
}
