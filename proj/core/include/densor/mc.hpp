// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>

#include "densor/channel.hpp"
#include "densor/kernel.hpp"

namespace densor {

/// One Monte Carlo estimate. Trials use independent per-trial RNG streams
/// and a fixed-order pairwise reduction, so identical seeds give
/// bit-identical results under any threading.
struct McResult {
    double estimate = 0.0;
    double stderr_ = 0.0;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    bool infinite = false;                   ///< noiseless AF variant: SINR diverges
    std::optional<double> beamforming_gain;  ///< reported with the noiseless variant
};

/// Squared-error distortion between a realization and its reconstruction on
/// a weighted grid: (1/T0) sum_q w_q (s_q - shat_q)^2.
double mean_square_distortion(std::span<const double> s, std::span<const double> s_hat,
                              std::span<const double> weights, double t0);

/// Simulates the separation-based source-coding half: draws the process
/// jointly on the sensor grid and a reconstruction grid, pushes the samples
/// through the test channel T_i = S_i + W_i with W ~ N(0, sigma_d2 I),
/// MMSE-reconstructs, and integrates the squared error. The matching
/// analytic value is the achievable distortion at theta' = sigma_d2 T0/(N-1)
/// evaluated on the same grid. quad_points >= 100 reconstruction nodes.
McResult simulate_separation_scheme(const KernelModel& model, int n, double sigma_d2,
                                    std::size_t trials, int quad_points, std::uint64_t seed);

/// Simulates the two-slot amplify-and-forward hop for one source node and
/// estimates the collector SINR as (signal coefficient)^2 sample-var(X) over
/// sample-var(noise aggregate). noise_scale = 0 flags the noiseless
/// beamforming limit instead of returning a ratio.
McResult simulate_af_sinr(const ChannelScenario& scenario, const AfDesign& design,
                          std::size_t trials, std::uint64_t seed, double noise_scale = 1.0,
                          int node = 1);

} // namespace densor
