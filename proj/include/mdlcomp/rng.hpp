#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "mdlcomp/types.hpp"

namespace mdlcomp {

/// The single random source used by every generator in the library.
///
/// A 64-bit Mersenne twister seeded directly with the caller's seed. Draws
/// are consumed in a fixed order (row-major for matrices), so the output of
/// every generator is a pure function of its seed. Replicate r of an
/// experiment uses seed base_seed + r.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double normal();
    double uniform();

    /// n x d matrix of standard normals, filled row by row.
    Matrix normal_matrix(Eigen::Index rows, Eigen::Index cols);
    Vector normal_vector(Eigen::Index size);

    /// Uniformly random permutation of 0..size-1 (Fisher-Yates).
    std::vector<Eigen::Index> permutation(Eigen::Index size);

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace mdlcomp
