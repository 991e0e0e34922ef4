#include "mdlcomp/kernel.hpp"

#include <cmath>
#include <limits>

#include "mdlcomp/io.hpp"
#include "mdlcomp/optimize.hpp"
#include "mdlcomp/ridge.hpp"

namespace mdlcomp {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

Matrix load_kernel_matrix(const std::string& path) {
    const Matrix k = io::read_matrix_csv(path);
    if (k.rows() != k.cols()) throw InputError("kernel file '" + path + "' is not square");
    check_kernel_matrix(k);
    return 0.5 * (k + k.transpose());
}

Matrix build_kernel(const Matrix& points, const KernelSpec& spec) {
    Matrix k;
    switch (spec.kind) {
    case KernelSpec::Kind::precomputed:
        k = load_kernel_matrix(spec.path);
        break;
    case KernelSpec::Kind::rbf: {
        if (!(spec.bandwidth > 0.0)) throw InputError("rbf bandwidth must be positive");
        if (points.rows() < 1 || !all_finite(points)) throw InputError("kernel points must be finite");
        const Eigen::Index n = points.rows();
        k.resize(n, n);
        const double scale = 2.0 * spec.bandwidth * spec.bandwidth;
        for (Eigen::Index i = 0; i < n; ++i) {
            k(i, i) = 1.0;
            for (Eigen::Index j = i + 1; j < n; ++j) {
                const double v = std::exp(-(points.row(i) - points.row(j)).squaredNorm() / scale);
                k(i, j) = v;
                k(j, i) = v;
            }
        }
        break;
    }
    case KernelSpec::Kind::polynomial: {
        if (spec.degree < 1) throw InputError("polynomial degree must be >= 1");
        if (points.rows() < 1 || !all_finite(points)) throw InputError("kernel points must be finite");
        const Matrix inner = points * points.transpose();
        k = (inner.array() + spec.offset).pow(static_cast<double>(spec.degree)).matrix();
        break;
    }
    }
    if (spec.normalize) {
        const double trace = k.trace();
        if (!(trace > 0.0)) throw NumericError("cannot normalize a kernel with zero trace");
        k *= static_cast<double>(k.rows()) / trace;
    }
    return k;
}

KernelComplexityInput make_kernel_input(const Matrix& kernel, const Vector& truth_values,
                                        double noise_variance, double hilbert_norm_sq_over_sigma_sq) {
    check_kernel_matrix(kernel);
    if (truth_values.size() != kernel.rows())
        throw InputError("truth values length does not match kernel size");
    if (!(noise_variance > 0.0)) throw InputError("noise variance must be positive");
    const SymmetricEigen eig = symmetric_eigen(0.5 * (kernel + kernel.transpose()));
    KernelComplexityInput input;
    input.eigenvalues = eig.eigenvalues.cwiseMax(0.0);
    input.rotated_truth = eig.eigenvectors.transpose() * truth_values;
    input.noise_variance = noise_variance;
    input.hilbert_norm_sq_over_sigma_sq = hilbert_norm_sq_over_sigma_sq;
    return input;
}

double kl_kernel_code(const KernelComplexityInput& input, double lambda) {
    if (!input.rotated_truth) throw InputError("kernel KL needs truth values");
    if (lambda < 0.0 || std::isnan(lambda)) throw InputError("kernel penalty must be nonnegative");
    if (lambda == 0.0) return kInf;
    const Vector& alpha = *input.rotated_truth;
    const double n = static_cast<double>(input.samples());
    double fit = 0.0, complexity = 0.0;
    for (Eigen::Index i = 0; i < input.eigenvalues.size(); ++i) {
        const double rho = input.eigenvalues(i);
        fit += lambda / (lambda + rho) * (alpha(i) * alpha(i) / input.noise_variance + 1.0);
        complexity += std::log1p(rho / lambda);
    }
    return fit / (2.0 * n) + complexity / (2.0 * n) - 0.5;
}

double kernel_bound_objective(const KernelComplexityInput& input, double lambda) {
    if (!(lambda > 0.0)) return kInf;
    const double n = static_cast<double>(input.samples());
    double complexity = 0.0;
    for (Eigen::Index i = 0; i < input.eigenvalues.size(); ++i)
        complexity += std::log1p(input.eigenvalues(i) / lambda);
    return lambda * input.hilbert_norm_sq_over_sigma_sq / (2.0 * n) + complexity / (2.0 * n);
}

KernelBound kernel_mdl_bound(const KernelComplexityInput& input) {
    if (input.samples() < 1) throw InputError("kernel bound needs at least one eigenvalue");
    if (!(input.hilbert_norm_sq_over_sigma_sq >= 0.0))
        throw InputError("SNR^2 must be nonnegative");
    const double top = input.eigenvalues.maxCoeff();
    if (!(top > 0.0)) return {0.0, 1e-8};
    if (input.hilbert_norm_sq_over_sigma_sq == 0.0) return {0.0, kInf};

    const auto objective = [&input](double lambda) { return kernel_bound_objective(input, lambda); };
    const LogGridMinimum m =
        minimize_on_log_grid(objective, log_grid(1e-8 * top, 1e4 * top, 60), true, 1e-8);
    return {m.value, m.argmin};
}

void DecayRegime::validate() const {
    if (!(dim > 0.0)) throw InputError("decay regime dimension must be positive");
    if (!(snr > 0.0)) throw InputError("decay regime SNR must be positive");
    if (!(n >= 1.0)) throw InputError("decay regime sample size must be >= 1");
    if (kind == Kind::sobolev && !(omega > dim / 2.0))
        throw InputError("sobolev regime needs omega > d/2");
    if (kind == Kind::ntk_like && !(dim + a > 1.0)) throw InputError("ntk regime needs d + a > 1");
}

double DecayRegime::alpha() const {
    switch (kind) {
    case Kind::sobolev: return omega / dim;
    case Kind::ntk_like: return 0.5 * (dim + a);
    case Kind::gaussian_like: break;
    }
    throw InputError("gaussian-like decay has no polynomial index");
}

double decay_constant(double alpha, double snr) {
    return std::pow(alpha, 2.0 * alpha / (1.0 + 2.0 * alpha)) * std::pow(snr, 2.0 / (1.0 + 2.0 * alpha));
}

double decay_regime_bound(const DecayRegime& regime) {
    regime.validate();
    const double snr_sq = regime.snr * regime.snr;
    if (regime.kind == DecayRegime::Kind::gaussian_like) {
        const double l = std::log(regime.n * regime.dim * snr_sq);
        return regime.dim * l * l / regime.n;
    }
    const double alpha = regime.alpha();
    const double exponent = 2.0 * alpha / (1.0 + 2.0 * alpha);
    return decay_constant(alpha, regime.snr) *
           std::pow(std::log(regime.n * snr_sq) / regime.n, exponent);
}

double decay_normalizer(double alpha, Eigen::Index n) {
    double sum = 0.0;
    for (Eigen::Index j = n; j >= 1; --j) sum += std::pow(static_cast<double>(j), -2.0 * alpha);
    return sum;
}

Vector polynomial_decay_eigenvalues(double alpha, Eigen::Index n) {
    if (n < 1) throw InputError("need at least one eigenvalue");
    const double c = decay_normalizer(alpha, n);
    Vector rho(n);
    for (Eigen::Index i = 0; i < n; ++i)
        rho(i) = c * static_cast<double>(n) * std::pow(static_cast<double>(i + 1), -2.0 * alpha);
    return rho;
}

}  // namespace mdlcomp
