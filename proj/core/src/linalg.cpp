// SPDX-License-Identifier: Apache-2.0
#include "densor/linalg.hpp"

#include <cmath>
#include <stdexcept>

#include <lapacke.h>

namespace densor::linalg {

namespace {

void check_square(const Matrix& a) {
    if (a.rows() != a.cols() || a.rows() == 0) {
        throw std::invalid_argument("symmetric eigensolver requires a nonempty square matrix");
    }
}

} // namespace

Vector symmetric_eigenvalues(const Matrix& a) {
    check_square(a);
    const lapack_int n = static_cast<lapack_int>(a.rows());
    Matrix work = a; // dsyevd overwrites its input
    Vector w(n);
    lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'N', 'L', n, work.data(), n, w.data());
    if (info != 0) {
        throw std::runtime_error("dsyevd failed, info=" + std::to_string(info));
    }
    return w.reverse().eval(); // ascending -> nonincreasing
}

SymmetricEigen symmetric_eigendecomposition(const Matrix& a) {
    check_square(a);
    const lapack_int n = static_cast<lapack_int>(a.rows());
    Matrix vec = a;
    Vector w(n);
    lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n, vec.data(), n, w.data());
    if (info != 0) {
        throw std::runtime_error("dsyevd failed, info=" + std::to_string(info));
    }
    SymmetricEigen out;
    out.values = w.reverse().eval();
    out.vectors = vec.rowwise().reverse().eval();
    return out;
}

double pairwise_sum(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n == 0) return 0.0;
    if (n <= 32) {
        double s = 0.0;
        for (double v : values) s += v;
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

MeanStderr mean_and_stderr(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n < 2) throw std::invalid_argument("mean_and_stderr needs at least 2 values");
    const double mean = pairwise_sum(values) / static_cast<double>(n);
    std::vector<double> sq(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double d = values[i] - mean;
        sq[i] = d * d;
    }
    const double var = pairwise_sum(sq) / static_cast<double>(n - 1);
    return {mean, std::sqrt(var / static_cast<double>(n))};
}

} // namespace densor::linalg
