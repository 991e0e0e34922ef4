#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "mdlcomp/types.hpp"

namespace mdlcomp {

/// Covariates, response and the assumed noise variance of one regression
/// problem.
struct Dataset {
    Matrix covariates;
    Vector response;
    double noise_variance = 1.0;

    Eigen::Index samples() const { return covariates.rows(); }
    Eigen::Index features() const { return covariates.cols(); }

    /// Throws InputError unless n, d >= 1, the response length matches,
    /// noise_variance > 0 and every entry is finite.
    void validate() const;
};

/// Eigenbasis of the Gram matrix X^T X.
///
/// eigenvalues has length d and is nonincreasing; entries past min(n, d)
/// are exactly zero, as are entries below kRankTolerance * max. The
/// eigenvectors are either the full orthonormal d x d basis or, for a thin
/// decomposition, only the columns belonging to nonzero eigenvalues.
/// left_vectors (n x min(n, d)) holds X u_i / sqrt(rho_i) for nonzero
/// eigenvalues and zero columns otherwise.
struct SpectralDecomposition {
    Matrix eigenvectors;
    Vector eigenvalues;
    Matrix left_vectors;
    std::optional<Vector> rotated_truth;
    Eigen::Index samples = 0;

    Eigen::Index features() const { return eigenvalues.size(); }
    Eigen::Index coordinates() const { return std::min(samples, features()); }
    Eigen::Index rank() const;

    /// w_i, or zero for coordinates outside a thin basis.
    double truth_coordinate(Eigen::Index i) const;
};

inline constexpr double kRankTolerance = 1e-12;

struct SpectralOptions {
    /// Complete U to a d x d orthonormal basis even when d > n. Thin
    /// decompositions are enough for every closed form in the library.
    bool complete_basis = true;
};

SpectralDecomposition spectral_decompose(const Matrix& x, SpectralOptions options = {});

/// Decomposes x and attaches w = U^T truth. truth must have length d.
SpectralDecomposition spectral_decompose(const Matrix& x, const Vector& truth,
                                         SpectralOptions options = {});

/// Same as spectral_decompose but for a symmetric PSD matrix given directly
/// (kernel matrices). Used by the kernel routines; no rank snapping of the
/// eigenvectors is needed there.
struct SymmetricEigen {
    Matrix eigenvectors;  // columns ordered to match eigenvalues
    Vector eigenvalues;   // nonincreasing
};
SymmetricEigen symmetric_eigen(const Matrix& symmetric);

enum class DesignKind { gaussian_iid, decaying, spike, cosine };
enum class RowScale { unit_variance, inv_n_variance };

struct DesignSpec {
    DesignKind kind = DesignKind::gaussian_iid;
    Eigen::Index n = 1;
    Eigen::Index d = 1;
    double alpha = 0.0;          // decaying only
    Eigen::Index spike_dim = 1;  // spike only
    RowScale row_scale = RowScale::unit_variance;
    std::uint64_t seed = 0;

    void validate() const;
};

Matrix generate_design(const DesignSpec& spec);

/// Per-column standard deviation of the design family before row scaling.
Vector design_column_scale(const DesignSpec& spec);

struct TruthSpec {
    Eigen::Index true_dim = 1;
    double norm = 1.0;
    std::uint64_t seed = 0;

    void validate() const;
};

Vector generate_truth(const TruthSpec& spec);

/// Restricts theta to its first d coordinates, or pads it with zeros up to d.
Vector project_truth(const Vector& theta, Eigen::Index d);

/// y = X theta + eps with eps ~ N(0, noise_variance) i.i.d.
Vector sample_linear_model(const Matrix& x, const Vector& theta, double noise_variance,
                           std::uint64_t seed);

const char* to_string(DesignKind kind);
const char* to_string(RowScale scale);
DesignKind parse_design_kind(const std::string& name);
RowScale parse_row_scale(const std::string& name);

}  // namespace mdlcomp
