#include "mdlcomp/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mdlcomp/rng.hpp"

namespace mdlcomp {

void Dataset::validate() const {
    if (covariates.rows() < 1 || covariates.cols() < 1)
        throw InputError("dataset needs at least one row and one column");
    if (response.size() != covariates.rows())
        throw InputError("response length " + std::to_string(response.size()) +
                         " does not match " + std::to_string(covariates.rows()) + " rows");
    if (!(noise_variance > 0.0) || !std::isfinite(noise_variance))
        throw InputError("noise variance must be positive and finite");
    if (!all_finite(covariates) || !all_finite(response))
        throw InputError("dataset contains non-finite entries");
}

Eigen::Index SpectralDecomposition::rank() const {
    return (eigenvalues.array() > 0.0).count();
}

double SpectralDecomposition::truth_coordinate(Eigen::Index i) const {
    if (!rotated_truth || i >= rotated_truth->size()) return 0.0;
    return (*rotated_truth)(i);
}

namespace {

// Ascending eigenpairs from Eigen, returned nonincreasing.
SymmetricEigen descending_eigen(const Matrix& sym) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
    if (solver.info() != Eigen::Success) throw NumericError("eigendecomposition did not converge");
    SymmetricEigen out;
    out.eigenvalues = solver.eigenvalues().reverse();
    out.eigenvectors = solver.eigenvectors().rowwise().reverse();
    return out;
}

void snap_small_eigenvalues(Vector& rho) {
    const double top = rho.size() > 0 ? rho.maxCoeff() : 0.0;
    for (Eigen::Index i = 0; i < rho.size(); ++i)
        if (!(top > 0.0) || rho(i) < kRankTolerance * top) rho(i) = 0.0;
}

// Flips column signs so the largest-magnitude entry is positive. Returns
// the applied signs.
Vector canonical_signs(Matrix& u) {
    Vector signs = Vector::Ones(u.cols());
    for (Eigen::Index j = 0; j < u.cols(); ++j) {
        Eigen::Index arg = 0;
        u.col(j).cwiseAbs().maxCoeff(&arg);
        if (u(arg, j) < 0.0) {
            u.col(j) *= -1.0;
            signs(j) = -1.0;
        }
    }
    return signs;
}

}  // namespace

SymmetricEigen symmetric_eigen(const Matrix& symmetric) {
    if (symmetric.rows() != symmetric.cols()) throw InputError("matrix is not square");
    if (!all_finite(symmetric)) throw InputError("matrix contains non-finite entries");
    return descending_eigen(symmetric);
}

SpectralDecomposition spectral_decompose(const Matrix& x, SpectralOptions options) {
    if (x.rows() < 1 || x.cols() < 1) throw InputError("design matrix is empty");
    if (!all_finite(x)) throw InputError("design matrix contains non-finite entries");

    const Eigen::Index n = x.rows();
    const Eigen::Index d = x.cols();
    const Eigen::Index m = std::min(n, d);

    SpectralDecomposition out;
    out.samples = n;
    out.eigenvalues = Vector::Zero(d);
    out.left_vectors = Matrix::Zero(n, m);

    if (d <= n) {
        SymmetricEigen inner = descending_eigen(x.transpose() * x);
        Vector rho = inner.eigenvalues.cwiseMax(0.0);
        snap_small_eigenvalues(rho);
        out.eigenvalues = rho;
        out.eigenvectors = std::move(inner.eigenvectors);
        canonical_signs(out.eigenvectors);
        for (Eigen::Index i = 0; i < d; ++i)
            if (rho(i) > 0.0)
                out.left_vectors.col(i) = x * out.eigenvectors.col(i) / std::sqrt(rho(i));
        if (!options.complete_basis) {
            const Eigen::Index r = out.rank();
            out.eigenvectors.conservativeResize(d, r);
        }
        return out;
    }

    // Overparameterized: decompose the n x n outer Gram and lift.
    SymmetricEigen outer = descending_eigen(x * x.transpose());
    Vector rho = outer.eigenvalues.cwiseMax(0.0);
    snap_small_eigenvalues(rho);
    out.eigenvalues.head(n) = rho;
    const Eigen::Index r = (rho.array() > 0.0).count();

    Matrix lifted(d, r);
    for (Eigen::Index i = 0; i < r; ++i)
        lifted.col(i) = x.transpose() * outer.eigenvectors.col(i) / std::sqrt(rho(i));

    // Re-orthonormalize the lifted columns and complete the basis. Householder
    // QR keeps the span of the leading columns; R's diagonal carries their
    // signs.
    Eigen::HouseholderQR<Matrix> qr(lifted);
    const Matrix r_factor = qr.matrixQR().topLeftCorner(r, r).triangularView<Eigen::Upper>();
    const Eigen::Index cols = options.complete_basis ? d : r;
    Matrix basis = qr.householderQ() * Matrix::Identity(d, cols);
    for (Eigen::Index i = 0; i < r; ++i)
        if (r_factor(i, i) < 0.0) basis.col(i) *= -1.0;
    canonical_signs(basis);
    out.eigenvectors = std::move(basis);

    for (Eigen::Index i = 0; i < r; ++i)
        out.left_vectors.col(i) = x * out.eigenvectors.col(i) / std::sqrt(rho(i));
    return out;
}

SpectralDecomposition spectral_decompose(const Matrix& x, const Vector& truth,
                                         SpectralOptions options) {
    if (truth.size() != x.cols())
        throw InputError("truth length " + std::to_string(truth.size()) + " does not match " +
                         std::to_string(x.cols()) + " columns");
    if (!all_finite(truth)) throw InputError("truth vector contains non-finite entries");
    SpectralDecomposition out = spectral_decompose(x, options);
    out.rotated_truth = out.eigenvectors.transpose() * truth;
    return out;
}

void DesignSpec::validate() const {
    if (n < 1 || d < 1) throw InputError("design needs n >= 1 and d >= 1");
    if (kind == DesignKind::decaying && !(alpha >= 0.0))
        throw InputError("decaying design needs alpha >= 0");
    if (kind == DesignKind::spike && (spike_dim < 1 || spike_dim > d))
        throw InputError("spike dimension must lie in [1, d]");
}

Vector design_column_scale(const DesignSpec& spec) {
    spec.validate();
    Vector scale = Vector::Ones(spec.d);
    for (Eigen::Index j = 0; j < spec.d; ++j) {
        const double index = static_cast<double>(j + 1);
        switch (spec.kind) {
        case DesignKind::gaussian_iid:
            break;
        case DesignKind::decaying:
            scale(j) = std::sqrt(std::pow(index, -spec.alpha));
            break;
        case DesignKind::spike:
            scale(j) = j < spec.spike_dim ? 4.0 : 1.0;
            break;
        case DesignKind::cosine:
            scale(j) = (j + 1) % 2 == 0 ? std::abs(std::cos(index)) : 0.0;
            break;
        }
    }
    return scale;
}

Matrix generate_design(const DesignSpec& spec) {
    const Vector scale = design_column_scale(spec);
    Rng rng(spec.seed);
    Matrix x = rng.normal_matrix(spec.n, spec.d);
    x *= scale.asDiagonal();
    if (spec.row_scale == RowScale::inv_n_variance) x /= std::sqrt(static_cast<double>(spec.n));
    return x;
}

void TruthSpec::validate() const {
    if (true_dim < 1) throw InputError("true dimension must be >= 1");
    if (!(norm > 0.0) || !std::isfinite(norm)) throw InputError("truth norm must be positive");
}

Vector generate_truth(const TruthSpec& spec) {
    spec.validate();
    Rng rng(spec.seed);
    Vector theta = rng.normal_vector(spec.true_dim);
    const double len = theta.norm();
    if (!(len > 0.0)) throw NumericError("degenerate truth draw");
    return theta * (spec.norm / len);
}

Vector project_truth(const Vector& theta, Eigen::Index d) {
    if (d < 1) throw InputError("projection dimension must be >= 1");
    Vector out = Vector::Zero(d);
    const Eigen::Index keep = std::min(d, theta.size());
    out.head(keep) = theta.head(keep);
    return out;
}

Vector sample_linear_model(const Matrix& x, const Vector& theta, double noise_variance,
                           std::uint64_t seed) {
    if (x.cols() != theta.size())
        throw InputError("design has " + std::to_string(x.cols()) + " columns but truth has " +
                         std::to_string(theta.size()) + " entries");
    if (!(noise_variance > 0.0)) throw InputError("noise variance must be positive");
    Rng rng(seed);
    return x * theta + std::sqrt(noise_variance) * rng.normal_vector(x.rows());
}

const char* to_string(DesignKind kind) {
    switch (kind) {
    case DesignKind::gaussian_iid: return "gaussian_iid";
    case DesignKind::decaying: return "decaying";
    case DesignKind::spike: return "spike";
    case DesignKind::cosine: return "cosine";
    }
    return "unknown";
}

const char* to_string(RowScale scale) {
    return scale == RowScale::unit_variance ? "unit_variance" : "inv_n_variance";
}

DesignKind parse_design_kind(const std::string& name) {
    if (name == "gaussian_iid" || name == "gaussian") return DesignKind::gaussian_iid;
    if (name == "decaying") return DesignKind::decaying;
    if (name == "spike") return DesignKind::spike;
    if (name == "cosine") return DesignKind::cosine;
    throw InputError("unknown design kind '" + name + "'");
}

RowScale parse_row_scale(const std::string& name) {
    if (name == "unit_variance") return RowScale::unit_variance;
    if (name == "inv_n_variance") return RowScale::inv_n_variance;
    throw InputError("unknown row scale '" + name + "'");
}

}  // namespace mdlcomp
