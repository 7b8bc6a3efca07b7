// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "densor/class_a.hpp"
#include "densor/kernel.hpp"
#include "densor/linalg.hpp"

namespace densor {

/// Scaled covariance of the N equispaced sensor samples:
/// Sigma'_N = (T0/(N-1)) K(t_i, t_j), t_i = (i-1) T0 / (N-1).
/// Its eigenvalues mu_k approximate the process eigenvalues lambda_k.
/// Immutable after construction.
struct SampledCovariance {
    int n = 0;
    double t0 = 1.0;
    std::vector<double> positions; ///< t_1..t_N
    linalg::Matrix sigma_prime;    ///< symmetric PSD, scaled
    linalg::Vector mu;             ///< eigenvalues, nonincreasing, round-off clamped at 0

    double trace() const { return sigma_prime.trace(); }
};

/// Builds Sigma'_N from the kernel and decomposes it. N >= 2.
SampledCovariance build_sampled_covariance(const KernelModel& model, int n);

struct ConvergenceRow {
    int n = 0;
    std::size_t k = 0;
    double mu = 0.0;        ///< mu_k^{(N)'}
    double reference = 0.0; ///< converged lambda_k
    double residual = 0.0;  ///< |mu - reference|
};

struct ConvergenceReport {
    std::vector<ConvergenceRow> rows;      ///< ordered by (k, N)
    bool residuals_decrease = false;       ///< every k: residual strictly decreases along n_list
    std::vector<double> reference;         ///< lambda_0..lambda_{k_max}
};

/// Residuals |mu_k^{(N)'} - lambda_k| for each N in n_list and k <= k_max,
/// against the converged reference spectrum at resolution n_ref.
/// Each N must satisfy N >= 2 k_max.
ConvergenceReport eigen_convergence_report(const KernelModel& model, const ClassAParams& params,
                                           std::span<const int> n_list, std::size_t k_max,
                                           int n_ref = 4000);

/// Grid-approximation error terms of the sampled representation.
/// a_term is a signed sum; its absolute value enters the distortion
/// decomposition bound.
struct GridErrorTerms {
    double a_term = 0.0; ///< A^(N), signed
    double b_term = 0.0; ///< B^(N), nonnegative
    double a_abs() const { return a_term < 0.0 ? -a_term : a_term; }
};

/// A^(N) and B^(N) by per-interval midpoint quadrature with quad_panels
/// nodes per sensor interval (>= 10 recommended).
GridErrorTerms grid_error_terms(const KernelModel& model, int n, int quad_panels);

/// One point of the multi-terminal achievable region at water level theta'.
struct AchievablePoint {
    double theta_prime = 0.0;
    double rate = 0.0;           ///< R_a^N = sum log(1 + mu_k/theta')/2
    double distortion = 0.0;     ///< D_a^N, exact MMSE integral
    double d_b = 0.0;            ///< D_b^N = (1/T0) sum (1/theta' + 1/mu_k)^{-1}
    bool decomposition_ok = false; ///< D_a <= 2|A^(N)| + B^(N) + D_b
};

/// Exact achievable rate-distortion point: one factorization of
/// (Sigma' + theta' I), one linear solve per quadrature node.
AchievablePoint achievable_rd_point(const KernelModel& model, const SampledCovariance& cov,
                                    double theta_prime, int quad_panels);

/// D_a as a function of rate: inverts the strictly decreasing R_a by
/// bisection (1e-9 relative), then evaluates the exact integral once.
/// Throws RateRangeError with the achievable interval when out of range.
AchievablePoint d_a_of_rate(const KernelModel& model, const SampledCovariance& cov, double rate,
                            int quad_panels);

/// R_a^N(theta') from eigenvalues alone (no integral); used by the
/// bisection and by surrogate-mode sweeps.
double achievable_rate(std::span<const double> mu, double theta_prime);
double achievable_rate(const SampledCovariance& cov, double theta_prime);

/// D_b^N(theta') from eigenvalues alone; zero eigenvalues contribute 0.
double d_b_of_theta(std::span<const double> mu, double theta_prime, double t0);

/// Matrix-inversion-lemma split of the achievable distortion:
/// D_a = D_s + D_theta with D_s the noiseless-sample MMSE residual and
/// D_theta the test-channel excess. Both sides are computed independently
/// of the direct integral. Requires Sigma' strictly positive definite.
struct MilSplit {
    double d_s = 0.0;
    double d_theta = 0.0;
    double total() const { return d_s + d_theta; }
};
MilSplit mil_decomposition(const KernelModel& model, const SampledCovariance& cov,
                           double theta_prime, int quad_panels);

/// Water-level window for the achievable scheme at a target sum rate.
/// lower/upper bound the regime where the rate and distortion estimates
/// hold; lower_loose is the tighter sequence the achievable-distortion
/// theorem pins; [rate_lo, rate_hi] is the valid rate interval.
struct ThetaWindow {
    double lower = 0.0;
    double upper = 0.0;
    double lower_loose = 0.0;
    double rate_lo = 0.0;
    double rate_hi = 0.0;
    bool target_in_range = false;
};

/// Instantiates the power-of-log window sequences at sensor count n for a
/// target rate kappa*nu*log(N P(N)). Throws std::invalid_argument when the
/// window is empty at this n.
ThetaWindow theta_window(const ClassAParams& params, int n, double target_rate, double nu,
                         double kappa);

} // namespace densor
