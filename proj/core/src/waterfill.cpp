// SPDX-License-Identifier: Apache-2.0
#include "densor/waterfill.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "densor/errors.hpp"

namespace densor {

namespace {

// suggested truncation so that lambda''_{k} < theta
std::size_t suggested_k_max(const ClassAParams& p, double theta) {
    const double k = std::pow(p.d / theta, 1.0 / p.x) + p.c_u + 1.0;
    return static_cast<std::size_t>(std::ceil(k)) + 1;
}

} // namespace

WaterfillPoint waterfill_point(const ClassAParams& params, double theta, std::size_t k_max) {
    if (!(theta > 0.0)) throw std::invalid_argument("waterfill_point: theta > 0 required");
    if (k_max <= static_cast<std::size_t>(params.k0)) {
        throw TruncationError("waterfill_point: k_max must exceed the head length K0",
                              suggested_k_max(params, theta));
    }
    const double lam_hi_kmax = spectrum_bounds(params, k_max).hi;
    if (!(lam_hi_kmax < theta)) {
        throw TruncationError("waterfill_point: lambda''_{k_max} >= theta, rate sum not finite at this truncation",
                              suggested_k_max(params, theta));
    }

    double rate = 0.0;
    double head_sum = 0.0;
    for (std::size_t k = 0; k <= k_max; ++k) {
        const double lam = spectrum_midpoint(params, k);
        if (lam > theta) {
            rate += 0.5 * std::log(lam / theta);
            head_sum += theta;
        } else {
            head_sum += lam;
        }
    }
    const double tail_lo = tail_sum_lower(params, k_max);
    const double tail_hi = tail_sum_upper(params, k_max);

    WaterfillPoint pt;
    pt.theta = theta;
    pt.rate = rate;
    pt.distortion = (head_sum + 0.5 * (tail_lo + tail_hi)) / params.t0;
    pt.distortion_err = 0.5 * (tail_hi - tail_lo) / params.t0;
    return pt;
}

WaterfillPoint dp_of_rate(const ClassAParams& params, double rate, std::size_t k_max) {
    if (!(rate >= 0.0)) throw std::invalid_argument("dp_of_rate: R >= 0 required");
    const double lambda0 = params.head_eigenvalues.front();
    if (rate == 0.0) {
        return waterfill_point(params, lambda0 * (1.0 + 1e-12), k_max);
    }
    // bracket guaranteeing a sign change of rate(theta) - R
    double lo = spectrum_bounds(params, k_max).hi;
    double hi = lambda0 * (1.0 + 1e-12);
    const double rate_at_lo = waterfill_point(params, lo * (1.0 + 1e-15), k_max).rate;
    if (rate > rate_at_lo) {
        throw TruncationError("dp_of_rate: R=" + std::to_string(rate) +
                                  " beyond the range resolvable with k_max=" + std::to_string(k_max),
                              suggested_k_max(params, lo * std::exp(-2.0 * rate / k_max)));
    }
    const double tol = 1e-9 * std::max(1.0, rate);
    WaterfillPoint mid_pt;
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = std::sqrt(lo * hi);
        mid_pt = waterfill_point(params, mid, k_max);
        if (std::abs(mid_pt.rate - rate) < tol) return mid_pt;
        if (mid_pt.rate > rate) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return mid_pt;
}

double dp_lower_const(const ClassAParams& params, double kappa) {
    if (!(kappa > 0.0) || !(kappa <= 1.0)) throw std::invalid_argument("dp_lower_const: kappa in (0,1] required");
    const double x = params.x;
    return kappa * (1.0 + kappa / (x - 1.0)) * std::pow(kappa * x / 2.0, x - 1.0) * params.d / params.t0;
}

double dl_scaling_const(const ClassAParams& params, double kappa) {
    if (!(kappa > 0.0) || !(kappa <= 1.0)) throw std::invalid_argument("dl_scaling_const: kappa in (0,1] required");
    const double x = params.x;
    return kappa * kappa * (1.0 + kappa / (x - 1.0)) * std::pow(kappa * x, x - 1.0) * params.d / params.t0;
}

double da_upper_const(const ClassAParams& params, double kappa) {
    if (!(kappa > 0.0) || !(kappa <= 1.0)) throw std::invalid_argument("da_upper_const: kappa in (0,1] required");
    const double x = params.x;
    const double q = x * x - (1.0 - std::log(2.0)) * x + (1.0 - std::log(2.0));
    const double num = params.d * (1.0 + kappa * kappa * (x - 1.0)) * std::pow(q, x - 1.0);
    const double den = params.t0 * std::pow(kappa, 2.0 * x + 2.0) * std::pow(2.0, x - 1.0) *
                       std::pow(x - 1.0, x);
    return num / den;
}

double du_upper_const(const ClassAParams& params, double kappa, double nu) {
    if (!(nu > 0.0) || !(nu <= 0.25)) throw std::invalid_argument("du_upper_const: nu in (0, 1/4] required");
    const double x = params.x;
    return da_upper_const(params, kappa) / std::pow(kappa * nu, x - 1.0);
}

} // namespace densor
