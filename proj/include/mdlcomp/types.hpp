#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace mdlcomp {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Malformed or inconsistent caller input (bad dimensions, non-finite
/// entries, unknown columns). Maps to CLI exit status 1.
class InputError : public std::invalid_argument {
public:
    explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

/// A computation that could not produce a finite answer. Maps to CLI exit
/// status 2.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

inline bool all_finite(const Matrix& m) { return m.allFinite(); }
inline bool all_finite(const Vector& v) { return v.allFinite(); }

}  // namespace mdlcomp
