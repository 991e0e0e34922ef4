#pragma once

#include <cmath>
#include <filesystem>
#include <random>
#include <string>

#include <Eigen/Dense>

#include "mdlcomp/types.hpp"

// Test-side helpers. Everything here is computed directly with Eigen and the
// standard library so that it can serve as an oracle for the library code.
namespace testing_support {

using mdlcomp::Matrix;
using mdlcomp::Vector;

inline Matrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& gen,
                              double sd = 1.0) {
    std::normal_distribution<double> normal(0.0, sd);
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = normal(gen);
    return m;
}

inline Vector gaussian_vector(Eigen::Index size, std::mt19937_64& gen, double sd = 1.0) {
    return gaussian_matrix(size, 1, gen, sd).col(0);
}

inline double rel_diff(double a, double b) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

/// Eigenpairs of X^T X from a dense symmetric solver, descending.
struct GramEigen {
    Matrix vectors;
    Vector values;
};

inline GramEigen gram_eigen(const Matrix& x) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(x.transpose() * x);
    const Eigen::Index d = x.cols();
    GramEigen out{Matrix(d, d), Vector(d)};
    for (Eigen::Index i = 0; i < d; ++i) {
        out.values(i) = std::max(solver.eigenvalues()(d - 1 - i), 0.0);
        out.vectors.col(i) = solver.eigenvectors().col(d - 1 - i);
    }
    return out;
}

/// (X^T X + P)^{-1} X^T y by a dense solve.
inline Vector dense_ridge(const Matrix& x, const Vector& y, const Matrix& penalty) {
    return (x.transpose() * x + penalty).ldlt().solve(x.transpose() * y);
}

/// log-spaced points, endpoints included.
inline std::vector<double> geometric(double lo, double hi, int count) {
    std::vector<double> out;
    for (int i = 0; i < count; ++i)
        out.push_back(std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / (count - 1)));
    return out;
}

/// Golden-section minimizer in log(lambda), independent of the library's.
template <class F>
double golden_log_argmin(F f, double lo, double hi, double tol = 1e-13) {
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = std::log(lo), b = std::log(hi);
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = f(std::exp(c)), fd = f(std::exp(d));
    while (b - a > tol) {
        if (fc <= fd) {
            b = d, d = c, fd = fc;
            c = b - g * (b - a);
            fc = f(std::exp(c));
        } else {
            a = c, c = d, fc = fd;
            d = a + g * (b - a);
            fd = f(std::exp(d));
        }
    }
    return std::exp(0.5 * (a + b));
}

/// Fresh empty directory under the system temp path.
inline std::filesystem::path scratch_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("mdlcomp_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace testing_support
