#pragma once

#include "mdlcomp/linalg.hpp"
#include "mdlcomp/ridge.hpp"

namespace mdlcomp {

/// Oracle complexity of one (design, truth, noise variance) triple.
///
/// All per-sample quantities are in nats. Coordinates with rho_i = 0 or
/// w_i^2 < 1e-12 sigma^2 are excluded: their optimal penalty diverges and
/// their optimal redundancy is zero.
struct ComplexityReport {
    double mdl_comp = 0.0;
    double ropt = 0.0;
    /// sigma^2 / w_i^2 for each of the d coordinates (+inf where w_i = 0).
    Vector lambda_opt;
    /// 1/2 sum of log(lambda_i^opt) over retained coordinates.
    double codelength_hyper = 0.0;
    Eigen::Index retained = 0;
    Eigen::Index excluded = 0;
    /// No coordinate was retained; every quantity is zero.
    bool degenerate = false;
};

inline constexpr double kExclusionThreshold = 1e-12;

ComplexityReport oracle_complexity_report(const SpectralDecomposition& decomp,
                                          double noise_variance);

/// Per-sample KL divergence between the true Gaussian model and the
/// ridge-induced LNML code with the given penalty. +inf if any penalty on a
/// coordinate i < min(n, d) is zero.
double kl_ridge_code(const SpectralDecomposition& decomp, double noise_variance,
                     const PenaltySpec& penalty);

/// The separable summand f_i(lambda) of the KL above; lambda may be +inf.
double kl_coordinate_term(double rho, double w_sq_over_sigma_sq, double lambda);

/// Expected in-sample MSE (1/n) E||X theta_hat - X theta*||^2.
double insample_mse_analytic(const SpectralDecomposition& decomp, double noise_variance,
                             const PenaltySpec& penalty);

/// (sigma^2/n) sum log(1 + rho_i w_i^2 / sigma^2); dominates the in-sample
/// MSE of the optimal per-coordinate ridge.
double insample_bound(const SpectralDecomposition& decomp, double noise_variance);

/// The alternative (sigma^2 / n) * R_opt normalization, exposed for
/// comparison with insample_bound.
double insample_bound_scaled_ropt(const SpectralDecomposition& decomp, double noise_variance);

/// Worst-case expected codelength (nats, not per sample) of the ridge code
/// over all noise distributions with covariance bounded by sigma^2 I.
double minimax_worstcase_codelength(const SpectralDecomposition& decomp, double noise_variance,
                                    const PenaltySpec& penalty);

/// log C_Lambda, the log normalizer of the ridge LNML code:
/// 1/2 sum log((rho_i + lambda_i) / lambda_i). Needs no truth vector.
double lnml_log_normalizer(const SpectralDecomposition& decomp, const PenaltySpec& penalty);

struct ScalingRegimeInput {
    double d = 1;
    double n = 1;
    double true_dim = 1;
    double signal_energy = 1;  // r^2 = ||theta*||^2
    double noise_variance = 1;
};

enum class ScalingQuantity { mdl_comp, ropt };

/// Piecewise approximations of MDL-COMP and R_opt for isotropic Gaussian
/// designs with N(0, 1/n) entries, with r^2 replaced by r^2 / sigma^2.
double scaling_approximation(const ScalingRegimeInput& input, ScalingQuantity quantity);

struct RmtSpec {
    double gamma = 1.0;  // d / n
    double snr = 0.0;    // E||theta*||^2 / (sigma^2 d)
};

/// delta = g(snr, gamma) of the Marchenko-Pastur Shannon transform.
double rmt_delta(const RmtSpec& spec);

/// Asymptotic bound gamma log(1+snr-delta) + log(1+gamma snr-delta) - delta/snr.
double rmt_redundancy_bound(const RmtSpec& spec);

/// Continuous part of the Marchenko-Pastur density with ratio index gamma.
double mp_density(double a, double gamma);

/// Mass (1 - 1/gamma)_+ of the Marchenko-Pastur law at zero.
double mp_point_mass(double gamma);

/// Support [b1, b2] = [(1 - sqrt gamma)^2, (1 + sqrt gamma)^2].
std::pair<double, double> mp_support(double gamma);

}  // namespace mdlcomp
