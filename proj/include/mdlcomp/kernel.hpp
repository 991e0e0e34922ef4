#pragma once

#include <optional>
#include <string>

#include "mdlcomp/linalg.hpp"

namespace mdlcomp {

struct KernelSpec {
    enum class Kind { rbf, polynomial, precomputed } kind = Kind::rbf;
    double bandwidth = 1.0;
    int degree = 2;
    double offset = 1.0;
    std::string path;  // precomputed only
    /// Rescale so that trace(K) = n.
    bool normalize = false;
};

/// Builds the n x n kernel matrix of the rows of points. For precomputed
/// kernels, points is ignored and the matrix is read from spec.path.
Matrix build_kernel(const Matrix& points, const KernelSpec& spec);

/// Reads a headerless comma-separated square matrix, checks symmetry to 1e-8
/// and returns its symmetrized form.
Matrix load_kernel_matrix(const std::string& path);

/// Inputs to the kernel complexity routines, expressed in the eigenbasis of
/// the kernel matrix.
struct KernelComplexityInput {
    Vector eigenvalues;  // nonincreasing, nonnegative
    /// ||f*||_H^2 / sigma^2.
    double hilbert_norm_sq_over_sigma_sq = 0.0;
    /// alpha = U^T y* with y* = (f*(x_1), ..., f*(x_n)).
    std::optional<Vector> rotated_truth;
    double noise_variance = 1.0;

    Eigen::Index samples() const { return eigenvalues.size(); }
};

/// Eigendecomposes kernel and rotates truth_values into its eigenbasis.
KernelComplexityInput make_kernel_input(const Matrix& kernel, const Vector& truth_values,
                                        double noise_variance, double hilbert_norm_sq_over_sigma_sq);

/// Per-sample KL between N(y*, sigma^2 I) and the kernel ridge LNML code.
double kl_kernel_code(const KernelComplexityInput& input, double lambda);

/// lambda SNR^2 / (2n) + (1/2n) sum log(rho_i / lambda + 1).
double kernel_bound_objective(const KernelComplexityInput& input, double lambda);

struct KernelBound {
    double value = 0.0;
    double lambda = 0.0;
};

/// Infimum over lambda of kernel_bound_objective: a 60-point log grid on
/// [1e-8, 1e4] * rho_max, then golden-section refinement in log(lambda).
KernelBound kernel_mdl_bound(const KernelComplexityInput& input);

struct DecayRegime {
    enum class Kind { gaussian_like, sobolev, ntk_like } kind = Kind::sobolev;
    double dim = 1.0;
    double omega = 1.0;   // sobolev smoothness
    double a = 0.0;       // ntk_like offset
    double snr = 1.0;     // ||f*||_H / sigma
    double n = 1.0;

    void validate() const;
    /// Decay index alpha with rho_i ~ i^{-2 alpha} (not used by gaussian_like).
    double alpha() const;
};

/// Closed-form rate of the kernel MDL-COMP bound for each eigenvalue decay
/// regime, constants included.
double decay_regime_bound(const DecayRegime& regime);

/// C_{alpha, SNR} = alpha^{2 alpha / (1 + 2 alpha)} SNR^{2 / (1 + 2 alpha)}.
double decay_constant(double alpha, double snr);

/// c_alpha = sum_{j=1}^n j^{-2 alpha}.
double decay_normalizer(double alpha, Eigen::Index n);

/// rho_i = c_alpha n i^{-2 alpha}, i = 1..n.
Vector polynomial_decay_eigenvalues(double alpha, Eigen::Index n);

}  // namespace mdlcomp
