#include "mdlcomp/ridge.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "mdlcomp/optimize.hpp"
#include "mdlcomp/rng.hpp"

namespace mdlcomp {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLeverageCeiling = 1.0 - 1e-12;
}  // namespace

PenaltySpec PenaltySpec::scalar(double lambda) {
    if (!(lambda > 0.0)) throw InputError("ridge penalty must be positive (use ols() for lambda = 0)");
    PenaltySpec p;
    p.scalar_ = lambda;
    return p;
}

PenaltySpec PenaltySpec::per_coordinate(Vector lambdas) {
    if (lambdas.size() == 0) throw InputError("per-coordinate penalty is empty");
    for (Eigen::Index i = 0; i < lambdas.size(); ++i)
        if (!(lambdas(i) > 0.0)) throw InputError("per-coordinate penalties must be positive");
    PenaltySpec p;
    p.per_coordinate_ = std::move(lambdas);
    return p;
}

PenaltySpec PenaltySpec::ols() { return PenaltySpec{}; }

double PenaltySpec::at(Eigen::Index i) const {
    if (is_scalar()) return scalar_;
    return i < per_coordinate_.size() ? per_coordinate_(i) : kInf;
}

std::string PenaltySpec::describe() const {
    std::ostringstream out;
    if (is_ols())
        out << "ols";
    else if (is_scalar())
        out << "scalar(" << scalar_ << ")";
    else
        out << "per_coordinate(" << per_coordinate_.size() << ")";
    return out.str();
}

FitResult fit_ridge(const SpectralDecomposition& decomp, const Matrix& x, const Vector& y,
                    const PenaltySpec& penalty) {
    if (x.rows() != y.size()) throw InputError("response length does not match design rows");
    if (decomp.features() != x.cols() || decomp.samples != x.rows())
        throw InputError("decomposition does not belong to this design");
    if (!penalty.is_scalar() && penalty.coordinate_values().size() < decomp.coordinates())
        throw InputError("per-coordinate penalty needs at least min(n, d) entries");

    const Eigen::Index r = decomp.rank();
    FitResult out;
    out.lambda_used = penalty;
    out.coefficients = Vector::Zero(x.cols());
    for (Eigen::Index i = 0; i < r; ++i) {
        const double rho = decomp.eigenvalues(i);
        const double lambda = penalty.at(i);
        if (std::isinf(lambda)) continue;
        const double projection = decomp.left_vectors.col(i).dot(y);
        out.coefficients += decomp.eigenvectors.col(i) * (std::sqrt(rho) * projection / (rho + lambda));
    }
    out.minimum_norm = penalty.is_ols() && r < x.cols();
    out.training_residual_sq = (y - x * out.coefficients).squaredNorm();
    return out;
}

FitResult fit_ridge(const Dataset& data, const PenaltySpec& penalty) {
    data.validate();
    const SpectralDecomposition decomp =
        spectral_decompose(data.covariates, SpectralOptions{.complete_basis = false});
    return fit_ridge(decomp, data.covariates, data.response, penalty);
}

namespace {

SymmetricEigen checked_kernel_eigen(const Matrix& kernel, double tol) {
    if (kernel.rows() != kernel.cols() || kernel.rows() < 1)
        throw InputError("kernel matrix must be square and nonempty");
    if (!all_finite(kernel)) throw InputError("kernel matrix contains non-finite entries");
    const double scale = std::max(1.0, kernel.cwiseAbs().maxCoeff());
    if ((kernel - kernel.transpose()).cwiseAbs().maxCoeff() > tol * scale)
        throw InputError("kernel matrix is not symmetric");
    SymmetricEigen eig = symmetric_eigen(0.5 * (kernel + kernel.transpose()));
    const double top = std::max(1.0, eig.eigenvalues(0));
    if (eig.eigenvalues(eig.eigenvalues.size() - 1) < -tol * top)
        throw InputError("kernel matrix is not positive semidefinite");
    return eig;
}

}  // namespace

void check_kernel_matrix(const Matrix& kernel, double tol) { checked_kernel_eigen(kernel, tol); }

FitResult fit_kernel_ridge(const Matrix& kernel, const Vector& y, double lambda) {
    if (!(lambda > 0.0)) throw InputError("kernel ridge penalty must be positive");
    if (kernel.rows() != y.size()) throw InputError("response length does not match kernel size");
    const SymmetricEigen eig = checked_kernel_eigen(kernel, 1e-8);
    const Vector rho = eig.eigenvalues.cwiseMax(0.0);
    const Vector alpha = eig.eigenvectors.transpose() * y;
    FitResult out;
    out.lambda_used = PenaltySpec::scalar(lambda);
    out.coefficients = eig.eigenvectors * (alpha.array() / (rho.array() + lambda)).matrix();
    out.training_residual_sq = (y - kernel * out.coefficients).squaredNorm();
    return out;
}

Vector predict_linear(const Vector& coefficients, const Matrix& x_new) {
    if (x_new.cols() != coefficients.size())
        throw InputError("prediction design has " + std::to_string(x_new.cols()) +
                         " columns but the fit has " + std::to_string(coefficients.size()));
    return x_new * coefficients;
}

std::string CvScheme::describe() const {
    return kind == Kind::loocv ? std::string("loocv") : "kfold(" + std::to_string(folds) + ")";
}

double loocv_error(const SpectralDecomposition& decomp, const Vector& y, double lambda) {
    const Eigen::Index n = decomp.samples;
    const Eigen::Index r = decomp.rank();
    const auto v = decomp.left_vectors.leftCols(r);
    Vector shrink(r);
    for (Eigen::Index j = 0; j < r; ++j)
        shrink(j) = decomp.eigenvalues(j) / (decomp.eigenvalues(j) + lambda);
    const Vector leverage = v.array().square().matrix() * shrink;
    const Vector fitted = v * (shrink.asDiagonal() * (v.transpose() * y));
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (leverage(i) >= kLeverageCeiling) return kInf;
        const double loo = (y(i) - fitted(i)) / (1.0 - leverage(i));
        total += loo * loo;
    }
    return total / static_cast<double>(n);
}

namespace {

void check_grid(const std::vector<double>& grid) {
    if (grid.empty()) throw InputError("lambda grid is empty");
    for (double g : grid)
        if (!(g > 0.0) || !std::isfinite(g)) throw InputError("lambda grid values must be positive");
}

void select(CvResult& result) {
    const int best = argmin_smallest_key(result.grid, result.cv_errors);
    if (best < 0) throw NumericError("every lambda on the grid is infeasible for cross-validation");
    result.selected_lambda = result.grid[static_cast<std::size_t>(best)];
}

}  // namespace

CvResult loocv_select(const SpectralDecomposition& decomp, const Vector& y,
                      const std::vector<double>& grid) {
    check_grid(grid);
    if (decomp.samples < 2) throw InputError("leave-one-out needs n >= 2");
    if (y.size() != decomp.samples) throw InputError("response length does not match design rows");
    CvResult out;
    out.grid = grid;
    out.scheme = CvScheme{CvScheme::Kind::loocv, 0};
    out.cv_errors.reserve(grid.size());
    for (double lambda : grid) out.cv_errors.push_back(loocv_error(decomp, y, lambda));
    select(out);
    return out;
}

CvResult loocv_select(const Dataset& data, const std::vector<double>& grid) {
    data.validate();
    const SpectralDecomposition decomp =
        spectral_decompose(data.covariates, SpectralOptions{.complete_basis = false});
    return loocv_select(decomp, data.response, grid);
}

std::vector<int> kfold_assignment(Eigen::Index n, int k, std::uint64_t seed) {
    if (k < 2 || k > n) throw InputError("k-fold needs 2 <= k <= n");
    Rng rng(seed);
    const auto perm = rng.permutation(n);
    std::vector<int> fold(static_cast<std::size_t>(n));
    for (std::size_t p = 0; p < perm.size(); ++p)
        fold[static_cast<std::size_t>(perm[p])] = static_cast<int>(p % static_cast<std::size_t>(k));
    return fold;
}

CvResult kfold_select(const Dataset& data, const std::vector<double>& grid, int k,
                      std::uint64_t seed) {
    data.validate();
    check_grid(grid);
    const Eigen::Index n = data.samples();
    const std::vector<int> fold = kfold_assignment(n, k, seed);

    CvResult out;
    out.grid = grid;
    out.scheme = CvScheme{CvScheme::Kind::kfold, k};
    std::vector<double> sse(grid.size(), 0.0);

    for (int f = 0; f < k; ++f) {
        std::vector<Eigen::Index> train, held;
        for (Eigen::Index i = 0; i < n; ++i)
            (fold[static_cast<std::size_t>(i)] == f ? held : train).push_back(i);
        const Matrix x_train = data.covariates(train, Eigen::placeholders::all);
        const Vector y_train = data.response(train);
        const Matrix x_held = data.covariates(held, Eigen::placeholders::all);
        const Vector y_held = data.response(held);
        const SpectralDecomposition decomp =
            spectral_decompose(x_train, SpectralOptions{.complete_basis = false});
        for (std::size_t g = 0; g < grid.size(); ++g) {
            const FitResult fit = fit_ridge(decomp, x_train, y_train, PenaltySpec::scalar(grid[g]));
            sse[g] += (y_held - x_held * fit.coefficients).squaredNorm();
        }
    }
    for (double s : sse) out.cv_errors.push_back(s / static_cast<double>(n));
    select(out);
    return out;
}

}  // namespace mdlcomp
