// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "densor/kernel.hpp"

namespace densor {

/// Analytic spectrum description of a class-A Gaussian process: the
/// eigenvalues of K are sandwiched by d/(k+c_l)^x and d/(k-c_u)^x beyond
/// the head index K0, and the kernel/eigenfunctions obey Lipschitz orders
/// (alpha, beta, gamma) with eigenfunction growth exponent tau.
struct ClassAParams {
    double x = 2.0;  ///< eigenvalue decay exponent, > 1
    double d = 0.0;  ///< spectrum scale
    int c_l = 0;     ///< lower sandwich index offset (nonnegative)
    int c_u = 0;     ///< upper sandwich index offset (nonnegative)
    int k0 = 0;      ///< head length; spectrum known exactly for k <= k0
    double alpha = 1.0; ///< kernel Lipschitz order, in (1/2, 1]
    double beta = 1.0;  ///< K(t,.)phi_k Lipschitz order, <= 1
    double gamma = 1.0; ///< eigenfunction Lipschitz order, <= 1
    double tau = 0.0;   ///< eigenfunction growth exponent, >= 0
    double t0 = 1.0;    ///< process domain length
    std::vector<double> head_eigenvalues; ///< lambda_0 .. lambda_k0, nonincreasing

    std::optional<double> lipschitz_b; ///< audited Lipschitz constant, when available

    /// Throws std::invalid_argument on any violated invariant.
    void validate() const;
};

struct SpectrumBounds {
    double lo; ///< lambda'_k
    double hi; ///< lambda''_k
};

/// Sandwich values (lambda'_k, lambda''_k): the head value twice for
/// k <= K0, the d/(k +- c)^x pair beyond.
SpectrumBounds spectrum_bounds(const ClassAParams& params, std::size_t k);

/// Working spectrum estimate: head value for k <= K0, sandwich midpoint beyond.
double spectrum_midpoint(const ClassAParams& params, std::size_t k);

/// Closed-form integral bounds on the sandwich tails over k > k_from
/// (k_from >= K0). Lower bound of sum lambda'_k and upper bound of
/// sum lambda''_k; the true eigenvalue tail lies between them.
double tail_sum_lower(const ClassAParams& params, std::size_t k_from);
double tail_sum_upper(const ClassAParams& params, std::size_t k_from);

/// Class-A constants of the Gauss-Markov kernel (sigma2, eta, T0):
/// x = 2, alpha = beta = gamma = tau = 1, c_l = c_u = 1, d = sigma^2 T0^2 / pi^2,
/// K0 = max(2, floor(eta^2 T0^2 / pi^2 - 3/4)). Head eigenvalues are computed
/// numerically from the scaled sampled covariance at resolution n_ref with a
/// half-resolution consistency check (relative change < 1e-3). Results are
/// cached per (sigma2, eta, T0, n_ref).
ClassAParams gm_class_a_params(double sigma2, double eta, double t0, int n_ref = 4000);

/// Converged numeric eigenvalues lambda_0..lambda_{count-1} of the kernel,
/// from the scaled sampled covariance at resolution n_ref (cached). Used as
/// the reference spectrum in eigenvalue-convergence experiments; count must
/// not exceed n_ref/2.
std::vector<double> reference_spectrum(const KernelModel& model, std::size_t count, int n_ref = 4000);

} // namespace densor
