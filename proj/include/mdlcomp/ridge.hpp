#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mdlcomp/linalg.hpp"

namespace mdlcomp {

/// Ridge regularization: a scalar lambda * I, or per-coordinate penalties
/// U diag(lambda_1, ..., lambda_d) U^T in the Gram eigenbasis. Arbitrary PSD
/// penalty matrices are deliberately not representable.
class PenaltySpec {
public:
    static PenaltySpec scalar(double lambda);
    static PenaltySpec per_coordinate(Vector lambdas);
    /// lambda = 0: minimum-norm least squares.
    static PenaltySpec ols();

    bool is_scalar() const { return per_coordinate_.size() == 0; }
    bool is_ols() const { return is_scalar() && scalar_ == 0.0; }
    double scalar_value() const { return scalar_; }
    const Vector& coordinate_values() const { return per_coordinate_; }

    /// Penalty acting on eigen-coordinate i. Per-coordinate vectors shorter
    /// than i return +inf (fully shrunk).
    double at(Eigen::Index i) const;

    std::string describe() const;

private:
    double scalar_ = 0.0;
    Vector per_coordinate_;
};

struct FitResult {
    Vector coefficients;
    PenaltySpec lambda_used = PenaltySpec::ols();
    double training_residual_sq = 0.0;
    /// Set when OLS was requested on a rank-deficient Gram matrix and the
    /// minimum-norm solution was returned instead.
    bool minimum_norm = false;
};

/// theta = (X^T X + Lambda)^{-1} X^T y computed in the eigenbasis of X^T X.
FitResult fit_ridge(const Dataset& data, const PenaltySpec& penalty);
FitResult fit_ridge(const SpectralDecomposition& decomp, const Matrix& x, const Vector& y,
                    const PenaltySpec& penalty);

/// Dual coefficients beta = (K + lambda I)^{-1} y. K must be symmetric PSD
/// within 1e-8 (relative to its largest entry).
FitResult fit_kernel_ridge(const Matrix& kernel, const Vector& y, double lambda);

/// Throws InputError if kernel is not square, symmetric and PSD within tol.
void check_kernel_matrix(const Matrix& kernel, double tol = 1e-8);

Vector predict_linear(const Vector& coefficients, const Matrix& x_new);

struct CvScheme {
    enum class Kind { loocv, kfold } kind = Kind::loocv;
    int folds = 0;
    std::string describe() const;
};

struct CvResult {
    std::vector<double> grid;
    std::vector<double> cv_errors;  // +inf marks an infeasible lambda
    double selected_lambda = 0.0;
    CvScheme scheme;
};

/// Leave-one-out selection with the hat-matrix shortcut e_i / (1 - H_ii).
CvResult loocv_select(const Dataset& data, const std::vector<double>& grid);
CvResult loocv_select(const SpectralDecomposition& decomp, const Vector& y,
                      const std::vector<double>& grid);

/// Leave-one-out errors for one lambda via the shortcut; +inf when some
/// leverage reaches 1 - 1e-12.
double loocv_error(const SpectralDecomposition& decomp, const Vector& y, double lambda);

/// Seeded k-fold selection; mean squared validation error pooled over all
/// held-out rows.
CvResult kfold_select(const Dataset& data, const std::vector<double>& grid, int k,
                      std::uint64_t seed);

/// Fold label of every row: position in a seeded permutation modulo k.
std::vector<int> kfold_assignment(Eigen::Index n, int k, std::uint64_t seed);

}  // namespace mdlcomp
