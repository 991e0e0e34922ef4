#pragma once

#include <utility>
#include <vector>

#include "mdlcomp/linalg.hpp"
#include "mdlcomp/ridge.hpp"

namespace mdlcomp {

/// Outcome of minimizing the data-driven Prac-MDL-COMP objective over a
/// single ridge penalty.
struct PracSelection {
    double selected_lambda = 0.0;
    double objective_value = 0.0;  // nats per sample
    /// (1/2n) sum log(1 + rho_i / selected_lambda) over nonzero rho_i.
    double approx_ropt = 0.0;
    FitResult fit;
    std::vector<std::pair<double, double>> grid_trace;  // (lambda, objective), ascending lambda
    /// The grid minimum sat on an endpoint and was not refined.
    bool on_endpoint = false;
};

struct PracOptions {
    /// Golden-section refinement between the grid neighbours of the grid
    /// argmin. Disable for the grid-only protocol.
    bool refine = true;
};

double prac_objective_linear(const SpectralDecomposition& decomp, const Vector& y, double lambda,
                             double noise_variance);

/// y^T (I - X (X^T X + lambda I)^{-1} X^T) y, i.e. ||y - X theta||^2 +
/// lambda ||theta||^2 at the ridge solution.
double ridge_quadratic_form(const SpectralDecomposition& decomp, const Vector& y, double lambda);

/// (1/2n) sum over nonzero eigenvalues of log(1 + rho_i / lambda).
double approx_redundancy(const Vector& eigenvalues, Eigen::Index samples, double lambda);

PracSelection select_lambda_prac_linear(const Dataset& data, const std::vector<double>& grid,
                                        double noise_variance, PracOptions options = {});
PracSelection select_lambda_prac_linear(const SpectralDecomposition& decomp, const Matrix& x,
                                        const Vector& y, const std::vector<double>& grid,
                                        double noise_variance, PracOptions options = {});

/// Kernel counterpart; works in the eigenbasis of K.
double prac_objective_kernel(const SymmetricEigen& kernel_eigen, const Vector& y, double lambda,
                             double noise_variance);
double prac_objective_kernel(const Matrix& kernel, const Vector& y, double lambda,
                             double noise_variance);

PracSelection select_lambda_prac_kernel(const Matrix& kernel, const Vector& y,
                                        const std::vector<double>& grid, double noise_variance,
                                        PracOptions options = {});

/// Plug-in noise variance: residual variance of the LOOCV-selected ridge fit
/// with n - trace(H) degrees of freedom.
double estimate_noise_variance(const Dataset& data, const std::vector<double>& grid);

}  // namespace mdlcomp
