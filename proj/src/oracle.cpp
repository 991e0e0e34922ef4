#include "mdlcomp/oracle.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace mdlcomp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_noise(double noise_variance) {
    if (!(noise_variance > 0.0) || !std::isfinite(noise_variance))
        throw InputError("noise variance must be positive and finite");
}

void check_truth(const SpectralDecomposition& decomp) {
    if (!decomp.rotated_truth)
        throw InputError("oracle quantities need a decomposition with a truth vector");
}

void check_penalty(const SpectralDecomposition& decomp, const PenaltySpec& penalty) {
    if (!penalty.is_scalar() && penalty.coordinate_values().size() < decomp.coordinates())
        throw InputError("per-coordinate penalty needs at least min(n, d) entries");
}

bool retained(double rho, double w_sq, double noise_variance) {
    return rho > 0.0 && w_sq >= kExclusionThreshold * noise_variance;
}

}  // namespace

ComplexityReport oracle_complexity_report(const SpectralDecomposition& decomp,
                                          double noise_variance) {
    check_truth(decomp);
    check_noise(noise_variance);
    const double n = static_cast<double>(decomp.samples);

    ComplexityReport report;
    report.lambda_opt = Vector::Constant(decomp.features(), kInf);
    for (Eigen::Index i = 0; i < decomp.features(); ++i) {
        const double w = decomp.truth_coordinate(i);
        if (w != 0.0) report.lambda_opt(i) = noise_variance / (w * w);
    }

    double mdl_sum = 0.0, ropt_sum = 0.0, hyper_sum = 0.0;
    for (Eigen::Index i = 0; i < decomp.coordinates(); ++i) {
        const double rho = decomp.eigenvalues(i);
        const double w = decomp.truth_coordinate(i);
        const double w_sq = w * w;
        if (!retained(rho, w_sq, noise_variance)) {
            ++report.excluded;
            continue;
        }
        ++report.retained;
        const double lambda = report.lambda_opt(i);
        mdl_sum += std::log(rho + lambda);
        ropt_sum += std::log1p(rho * w_sq / noise_variance);
        hyper_sum += std::log(lambda);
    }
    report.mdl_comp = mdl_sum / (2.0 * n);
    report.ropt = ropt_sum / (2.0 * n);
    report.codelength_hyper = 0.5 * hyper_sum;
    report.degenerate = report.retained == 0;
    return report;
}

double kl_coordinate_term(double rho, double w_sq_over_sigma_sq, double lambda) {
    if (lambda == 0.0) return kInf;
    const double signal = rho * w_sq_over_sigma_sq + 1.0;
    if (std::isinf(lambda)) return signal;
    return signal * lambda / (lambda + rho) + std::log1p(rho / lambda);
}

double kl_ridge_code(const SpectralDecomposition& decomp, double noise_variance,
                     const PenaltySpec& penalty) {
    check_truth(decomp);
    check_noise(noise_variance);
    check_penalty(decomp, penalty);
    const Eigen::Index m = decomp.coordinates();
    double sum = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
        const double w = decomp.truth_coordinate(i);
        sum += kl_coordinate_term(decomp.eigenvalues(i), w * w / noise_variance, penalty.at(i));
    }
    if (std::isinf(sum)) return kInf;
    return (sum - static_cast<double>(m)) / (2.0 * static_cast<double>(decomp.samples));
}

double insample_mse_analytic(const SpectralDecomposition& decomp, double noise_variance,
                             const PenaltySpec& penalty) {
    check_truth(decomp);
    check_noise(noise_variance);
    check_penalty(decomp, penalty);
    double sum = 0.0;
    for (Eigen::Index i = 0; i < decomp.coordinates(); ++i) {
        const double rho = decomp.eigenvalues(i);
        if (rho == 0.0) continue;
        const double w = decomp.truth_coordinate(i);
        const double signal = rho * w * w;
        const double lambda = penalty.at(i);
        if (lambda == 0.0)
            sum += noise_variance;
        else if (std::isinf(lambda))
            sum += signal;
        else
        {
            const double shrink = lambda / (rho + lambda), keep = rho / (rho + lambda);
            sum += shrink * shrink * signal + noise_variance * keep * keep;
        }
    }
    return sum / static_cast<double>(decomp.samples);
}

double insample_bound(const SpectralDecomposition& decomp, double noise_variance) {
    check_truth(decomp);
    check_noise(noise_variance);
    double sum = 0.0;
    for (Eigen::Index i = 0; i < decomp.coordinates(); ++i) {
        const double w = decomp.truth_coordinate(i);
        sum += std::log1p(decomp.eigenvalues(i) * w * w / noise_variance);
    }
    return noise_variance * sum / static_cast<double>(decomp.samples);
}

double insample_bound_scaled_ropt(const SpectralDecomposition& decomp, double noise_variance) {
    return noise_variance / static_cast<double>(decomp.samples) *
           oracle_complexity_report(decomp, noise_variance).ropt;
}

double minimax_worstcase_codelength(const SpectralDecomposition& decomp, double noise_variance,
                                    const PenaltySpec& penalty) {
    check_truth(decomp);
    check_noise(noise_variance);
    check_penalty(decomp, penalty);
    const Eigen::Index m = decomp.coordinates();
    double sum = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
        const double w = decomp.truth_coordinate(i);
        sum += kl_coordinate_term(decomp.eigenvalues(i), w * w / noise_variance, penalty.at(i));
    }
    return 0.5 * static_cast<double>(decomp.samples - m) + 0.5 * sum;
}

double lnml_log_normalizer(const SpectralDecomposition& decomp, const PenaltySpec& penalty) {
    check_penalty(decomp, penalty);
    double sum = 0.0;
    for (Eigen::Index i = 0; i < decomp.coordinates(); ++i) {
        const double rho = decomp.eigenvalues(i), lambda = penalty.at(i);
        if (rho == 0.0) continue;
        if (lambda == 0.0) return std::numeric_limits<double>::infinity();
        sum += std::log1p(rho / lambda);
    }
    return 0.5 * sum;
}

double scaling_approximation(const ScalingRegimeInput& in, ScalingQuantity quantity) {
    if (!(in.d > 0) || !(in.n > 0) || !(in.true_dim > 0) || !(in.signal_energy > 0) ||
        !(in.noise_variance > 0))
        throw InputError("scaling approximation needs positive d, n, d*, r^2 and sigma^2");
    const double d = in.d, n = in.n, ds = in.true_dim;
    const double r2 = in.signal_energy / in.noise_variance;

    if (quantity == ScalingQuantity::ropt) {
        if (ds <= n) {
            if (d <= ds) return d / n * std::log1p(r2 / ds);
            if (d <= n) return d / n * std::log1p(r2 / d);
            return std::log1p(r2 / n);
        }
        // d* > n: the [d*, n] branch is empty.
        if (d <= n) return d / n * std::log1p(r2 / ds);
        return std::log1p(r2 / n);
    }

    if (ds <= n) {
        if (d <= ds) return d / n * std::log1p(ds / r2);
        if (d <= n) return d / n * std::log1p(d / r2);
        return std::log(d * (1.0 / r2 + 1.0 / n));
    }
    if (d <= n) return d / n * std::log1p(ds / r2);
    if (d <= ds) return std::log(d / n + ds / r2);
    return std::log(d * (1.0 / r2 + 1.0 / n));
}

namespace {

void check_rmt(const RmtSpec& spec) {
    if (!(spec.gamma > 0.0) || !std::isfinite(spec.gamma))
        throw InputError("aspect ratio gamma must be positive");
    if (!(spec.snr >= 0.0) || !std::isfinite(spec.snr))
        throw InputError("snr must be nonnegative");
}

// (A + B)^2 with A, B the two square roots of g(snr, gamma). delta is
// evaluated as 4 gamma snr^2 / (A + B)^2, which equals (A - B)^2 / 4 and
// stays accurate as snr -> 0.
double root_sum_sq(const RmtSpec& spec) {
    const double sg = std::sqrt(spec.gamma);
    const double a = std::sqrt(spec.snr * (1.0 + sg) * (1.0 + sg) + 1.0);
    const double b = std::sqrt(spec.snr * (1.0 - sg) * (1.0 - sg) + 1.0);
    return (a + b) * (a + b);
}

}  // namespace

double rmt_delta(const RmtSpec& spec) {
    check_rmt(spec);
    return 4.0 * spec.gamma * spec.snr * spec.snr / root_sum_sq(spec);
}

double rmt_redundancy_bound(const RmtSpec& spec) {
    check_rmt(spec);
    if (spec.snr == 0.0) return 0.0;
    const double delta = rmt_delta(spec);
    // delta / snr without dividing by a vanishing snr.
    const double delta_over_snr = 4.0 * spec.gamma * spec.snr / root_sum_sq(spec);
    return spec.gamma * std::log1p(spec.snr - delta) + std::log1p(spec.gamma * spec.snr - delta) -
           delta_over_snr;
}

std::pair<double, double> mp_support(double gamma) {
    if (!(gamma > 0.0)) throw InputError("aspect ratio gamma must be positive");
    const double sg = std::sqrt(gamma);
    return {(1.0 - sg) * (1.0 - sg), (1.0 + sg) * (1.0 + sg)};
}

double mp_density(double a, double gamma) {
    const auto [b1, b2] = mp_support(gamma);
    if (!(a > 0.0)) return 0.0;
    const double lo = std::max(a - b1, 0.0);
    const double hi = std::max(b2 - a, 0.0);
    return std::sqrt(lo * hi) / (2.0 * std::numbers::pi * gamma * a);
}

double mp_point_mass(double gamma) {
    if (!(gamma > 0.0)) throw InputError("aspect ratio gamma must be positive");
    return std::max(0.0, 1.0 - 1.0 / gamma);
}

}  // namespace mdlcomp
