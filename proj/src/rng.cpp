#include "mdlcomp/rng.hpp"

#include <numeric>

namespace mdlcomp {

double Rng::normal() { return normal_(engine_); }

double Rng::uniform() { return uniform_(engine_); }

Matrix Rng::normal_matrix(Eigen::Index rows, Eigen::Index cols) {
    Matrix out(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) out(i, j) = normal();
    return out;
}

Vector Rng::normal_vector(Eigen::Index size) {
    Vector out(size);
    for (Eigen::Index i = 0; i < size; ++i) out(i) = normal();
    return out;
}

std::vector<Eigen::Index> Rng::permutation(Eigen::Index size) {
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(size));
    std::iota(idx.begin(), idx.end(), Eigen::Index{0});
    // Explicit Fisher-Yates so the order does not depend on the standard
    // library's std::shuffle.
    for (Eigen::Index i = size - 1; i > 0; --i) {
        std::uniform_int_distribution<Eigen::Index> pick(0, i);
        std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(pick(engine_))]);
    }
    return idx;
}

}  // namespace mdlcomp
