// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>

#include "densor/class_a.hpp"

namespace densor {

/// One point on the parametric distortion-rate curve of the continuous
/// process. Rates are in nats per process realization; distortion is the
/// mean squared error averaged over [0,T0].
struct WaterfillPoint {
    double theta = 0.0;          ///< water level
    double rate = 0.0;           ///< R(theta) = sum max(0, log(lambda_k/theta))/2
    double distortion = 0.0;     ///< D(theta) = (1/T0)[sum min(theta, lambda_k) + tail]
    double distortion_err = 0.0; ///< half-width of the certified tail bracket
};

/// Evaluates the water-filling pair (R, D) at water level theta, truncating
/// the spectrum at k_max and bracketing the discarded tail by the closed-form
/// sandwich integrals. Requires lambda''_{k_max} < theta so the rate sum is
/// exactly finite; throws TruncationError with a usable k_max otherwise.
WaterfillPoint waterfill_point(const ClassAParams& params, double theta, std::size_t k_max);

/// Distortion-rate function D_p(R): bisection on the water level until
/// |rate - R| < 1e-9 max(1, R). Monotone nonincreasing in R.
WaterfillPoint dp_of_rate(const ClassAParams& params, double rate, std::size_t k_max = 100000);

/// Coefficient of R^{1-x} in the distortion-rate lower bound:
/// kappa (1 + kappa/(x-1)) (kappa x / 2)^{x-1} d / T0. The theorem holds for
/// 0 < kappa < 1; kappa = 1 evaluates the limiting constant.
double dp_lower_const(const ClassAParams& params, double kappa);

/// Coefficient of (1/log NP)^{x-1} in the distortion lower bound:
/// kappa^2 (1 + kappa/(x-1)) (kappa x)^{x-1} d / T0.
double dl_scaling_const(const ClassAParams& params, double kappa);

/// Coefficient of R^{1-x} in the achievable distortion-rate upper bound:
/// d (1 + kappa^2 (x-1)) Q^{x-1} / (T0 kappa^{2x+2} 2^{x-1} (x-1)^x)
/// with Q = x^2 - (1-log 2) x + (1-log 2).
double da_upper_const(const ClassAParams& params, double kappa);

/// Coefficient of (1/log NP)^{x-1} in the achievable distortion upper bound:
/// da_upper_const / (kappa^{x-1} nu^{x-1}).
double du_upper_const(const ClassAParams& params, double kappa, double nu);

} // namespace densor
