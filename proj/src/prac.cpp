#include "mdlcomp/prac.hpp"

#include <cmath>
#include <limits>

#include "mdlcomp/optimize.hpp"

namespace mdlcomp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_inputs(double lambda, double noise_variance) {
    if (lambda < 0.0 || std::isnan(lambda)) throw InputError("penalty must be nonnegative");
    if (!(noise_variance > 0.0)) throw InputError("noise variance must be positive");
}

PracSelection finish(const LogGridMinimum& m, const Vector& eigenvalues, Eigen::Index samples) {
    PracSelection out;
    out.selected_lambda = m.argmin;
    out.objective_value = m.value;
    out.on_endpoint = m.on_endpoint;
    out.approx_ropt = approx_redundancy(eigenvalues, samples, m.argmin);
    out.grid_trace.reserve(m.grid.size());
    for (std::size_t i = 0; i < m.grid.size(); ++i) out.grid_trace.emplace_back(m.grid[i], m.objective[i]);
    return out;
}

}  // namespace

double approx_redundancy(const Vector& eigenvalues, Eigen::Index samples, double lambda) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i)
        if (eigenvalues(i) > 0.0) sum += std::log1p(eigenvalues(i) / lambda);
    return sum / (2.0 * static_cast<double>(samples));
}

double ridge_quadratic_form(const SpectralDecomposition& decomp, const Vector& y, double lambda) {
    if (y.size() != decomp.samples) throw InputError("response length does not match design rows");
    double explained = 0.0;
    for (Eigen::Index i = 0; i < decomp.rank(); ++i) {
        const double rho = decomp.eigenvalues(i);
        const double p = decomp.left_vectors.col(i).dot(y);
        explained += p * p * rho / (rho + lambda);
    }
    return y.squaredNorm() - explained;
}

double prac_objective_linear(const SpectralDecomposition& decomp, const Vector& y, double lambda,
                             double noise_variance) {
    check_inputs(lambda, noise_variance);
    if (lambda == 0.0) return kInf;
    const double n = static_cast<double>(decomp.samples);
    const double fit = ridge_quadratic_form(decomp, y, lambda) / (2.0 * noise_variance);
    return fit / n + approx_redundancy(decomp.eigenvalues.head(decomp.coordinates()),
                                       decomp.samples, lambda);
}

PracSelection select_lambda_prac_linear(const SpectralDecomposition& decomp, const Matrix& x,
                                        const Vector& y, const std::vector<double>& grid,
                                        double noise_variance, PracOptions options) {
    if (!(noise_variance > 0.0)) throw InputError("noise variance must be positive");
    const auto objective = [&](double lambda) {
        return prac_objective_linear(decomp, y, lambda, noise_variance);
    };
    const LogGridMinimum m = minimize_on_log_grid(objective, grid, options.refine);
    PracSelection out = finish(m, decomp.eigenvalues.head(decomp.coordinates()), decomp.samples);
    out.fit = fit_ridge(decomp, x, y, PenaltySpec::scalar(out.selected_lambda));
    return out;
}

PracSelection select_lambda_prac_linear(const Dataset& data, const std::vector<double>& grid,
                                        double noise_variance, PracOptions options) {
    data.validate();
    const SpectralDecomposition decomp =
        spectral_decompose(data.covariates, SpectralOptions{.complete_basis = false});
    return select_lambda_prac_linear(decomp, data.covariates, data.response, grid, noise_variance,
                                     options);
}

double prac_objective_kernel(const SymmetricEigen& kernel_eigen, const Vector& y, double lambda,
                             double noise_variance) {
    check_inputs(lambda, noise_variance);
    if (y.size() != kernel_eigen.eigenvalues.size())
        throw InputError("response length does not match kernel size");
    if (lambda == 0.0) return kInf;
    const Vector alpha = kernel_eigen.eigenvectors.transpose() * y;
    // ||K theta - y||^2 + lambda theta^T K theta = lambda sum alpha_i^2 / (rho_i + lambda).
    double fit = 0.0;
    for (Eigen::Index i = 0; i < alpha.size(); ++i) {
        const double rho = std::max(kernel_eigen.eigenvalues(i), 0.0);
        fit += lambda * alpha(i) * alpha(i) / (rho + lambda);
    }
    const double n = static_cast<double>(y.size());
    return fit / (2.0 * noise_variance * n) +
           approx_redundancy(kernel_eigen.eigenvalues.cwiseMax(0.0), y.size(), lambda);
}

double prac_objective_kernel(const Matrix& kernel, const Vector& y, double lambda,
                             double noise_variance) {
    check_kernel_matrix(kernel);
    return prac_objective_kernel(symmetric_eigen(0.5 * (kernel + kernel.transpose())), y, lambda,
                                 noise_variance);
}

PracSelection select_lambda_prac_kernel(const Matrix& kernel, const Vector& y,
                                        const std::vector<double>& grid, double noise_variance,
                                        PracOptions options) {
    check_kernel_matrix(kernel);
    if (kernel.rows() != y.size()) throw InputError("response length does not match kernel size");
    if (!(noise_variance > 0.0)) throw InputError("noise variance must be positive");
    const SymmetricEigen eig = symmetric_eigen(0.5 * (kernel + kernel.transpose()));
    const auto objective = [&](double lambda) {
        return prac_objective_kernel(eig, y, lambda, noise_variance);
    };
    const LogGridMinimum m = minimize_on_log_grid(objective, grid, options.refine);
    PracSelection out = finish(m, eig.eigenvalues.cwiseMax(0.0), y.size());
    out.fit = fit_kernel_ridge(kernel, y, out.selected_lambda);
    return out;
}

double estimate_noise_variance(const Dataset& data, const std::vector<double>& grid) {
    data.validate();
    const SpectralDecomposition decomp =
        spectral_decompose(data.covariates, SpectralOptions{.complete_basis = false});
    const CvResult cv = loocv_select(decomp, data.response, grid);
    const FitResult fit =
        fit_ridge(decomp, data.covariates, data.response, PenaltySpec::scalar(cv.selected_lambda));
    double dof = 0.0;
    for (Eigen::Index i = 0; i < decomp.rank(); ++i)
        dof += decomp.eigenvalues(i) / (decomp.eigenvalues(i) + cv.selected_lambda);
    const double remaining = static_cast<double>(data.samples()) - dof;
    if (!(remaining > 0.0)) throw NumericError("no residual degrees of freedom to estimate sigma^2");
    return fit.training_residual_sq / remaining;
}

}  // namespace mdlcomp
