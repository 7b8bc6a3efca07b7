// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

namespace densor::linalg {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Eigenvalues of a dense symmetric matrix, sorted nonincreasing.
/// Backed by LAPACK dsyevd (tridiagonalization + divide and conquer).
Vector symmetric_eigenvalues(const Matrix& a);

struct SymmetricEigen {
    Vector values;  ///< nonincreasing
    Matrix vectors; ///< column k pairs with values[k]
};

/// Full symmetric eigendecomposition, sorted nonincreasing.
SymmetricEigen symmetric_eigendecomposition(const Matrix& a);

/// Deterministic pairwise sum; independent of caller threading.
double pairwise_sum(std::span<const double> values);

/// Mean and standard error (sample stddev / sqrt(n)) with pairwise accumulation.
struct MeanStderr {
    double mean;
    double stderr_;
};
MeanStderr mean_and_stderr(std::span<const double> values);

} // namespace densor::linalg
