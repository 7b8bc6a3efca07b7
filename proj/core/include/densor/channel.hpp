// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "densor/class_a.hpp"
#include "densor/linalg.hpp"

namespace densor {

enum class PowerFamily { constant, linear, power_law, near_exponential };

/// Total-power schedule P(N). Supported families:
///   constant            P(N) = P_tot
///   linear              P(N) = N * P_ind
///   power-law           P(N) = N^-omega
///   near-exponential    P(N) = exp(N^c) / N
struct PowerSchedule {
    PowerFamily family = PowerFamily::constant;
    double p_tot = 1.0;
    double p_ind = 1.0;
    double omega = 0.0;
    double growth_c = 0.0;

    double operator()(double n) const;
    std::string describe() const;

    static PowerSchedule constant(double p_tot);
    static PowerSchedule linear(double p_ind);
    static PowerSchedule power_law(double omega);
    static PowerSchedule near_exponential(double c);
};

enum class PowerRegime { very_small, small, medium, large };
const char* to_string(PowerRegime r);

/// Symbolic regime classification of a schedule family:
///   very-small  1/(N P(N)) does not vanish; distortion stays Theta(1)
///   small       N P(N) grows but no epsilon > 0 keeps P(N) N^{1/2-eps} > 1
///   medium      the relaying rate grows and N P(N) stays below the
///               near-exponential ceiling exp(N^cmin) set by the class-A orders
///   large       above that ceiling; no upper bound available
PowerRegime classify_power_regime(const PowerSchedule& schedule, const ClassAParams& params,
                                  double epsilon);

/// Exponent cmin of the medium/large boundary exp(N^cmin)/N:
/// min(gamma/(2 tau), (2 alpha - 1)/(2(x-1)), beta/(x + tau + 1)).
double medium_regime_exponent(const ClassAParams& params);

/// Channel gains for N sensor nodes and a collector. Gains live in
/// [h_lower, h_upper]; random mode draws i.i.d. uniform values determined
/// by (seed, i, j) so that arbitrarily large N needs no gain storage.
/// Immutable after construction.
class ChannelScenario {
public:
    static ChannelScenario constant_gains(int n, double h, PowerSchedule power);
    static ChannelScenario random_gains(int n, double h_lower, double h_upper, PowerSchedule power,
                                        std::uint64_t seed);
    /// Gain table from CSV rows `i,j,h` (j = 0 is the collector).
    static ChannelScenario from_csv(const std::string& path, PowerSchedule power);

    int n() const noexcept { return n_; }
    double h_lower() const noexcept { return h_lower_; }
    double h_upper() const noexcept { return h_upper_; }
    bool random() const noexcept { return random_; }
    std::uint64_t seed() const noexcept { return seed_; }
    const PowerSchedule& power() const noexcept { return power_; }
    double total_power() const { return power_(static_cast<double>(n_)); }

    double collector_gain(int i) const; ///< h_{i0}, i in [1, N]
    double relay_gain(int i, int j) const; ///< h_{ij}, i != j in [1, N]

    void write_csv(std::ostream& out) const;

private:
    ChannelScenario() = default;

    int n_ = 0;
    double h_lower_ = 1.0;
    double h_upper_ = 1.0;
    bool random_ = false;
    std::uint64_t seed_ = 0;
    PowerSchedule power_;
    std::optional<std::vector<double>> explicit_collector_;
    std::optional<linalg::Matrix> explicit_relay_;
};

/// Point-to-point capacity of the N-transmit 1-receive cut, with the
/// gain-bound bracket it must lie in.
struct CapacityBound {
    double value = 0.0; ///< log(1 + sum h_{i0}^2 P(N)) / 2
    double lower = 0.0; ///< at h_lower
    double upper = 0.0; ///< at h_upper
};
CapacityBound c_upper(const ChannelScenario& scenario);

/// Amplify-and-forward design: beta_{ij} = zeta h_{ij} h_{j0} with
/// zeta^2 = P(N) / (h_u^6 N P(N) + h_u^4 N). feasible records the
/// per-node power audit beta^2 (h^2 P + 1) <= P/N (an equality-tight
/// self-check; failure would be an implementation bug). The dense beta
/// matrix is materialized only for N <= 2000; beta(i,j) recomputes it
/// from zeta either way.
struct AfDesign {
    double zeta = 0.0;
    linalg::Matrix beta_matrix; ///< (i-1, j-1) indexed; empty for large N
    bool feasible = false;
    double min_margin = 0.0; ///< min over (i,j) of P/N - beta^2 (h^2 P + 1)

    double beta(const ChannelScenario& scenario, int i, int j) const;
};
AfDesign af_design(const ChannelScenario& scenario);

/// Per-node amplify-and-forward rate: the exact two-slot rate and the
/// closed-form gain-bound lower bound C_b^N.
struct AfRate {
    double exact = 0.0;
    double lower_bound = 0.0; ///< C_b^N
    double sinr = 0.0;        ///< interior SINR of the exact rate
};
AfRate af_rate(const ChannelScenario& scenario, const AfDesign& design, int node);

/// Achievable sum-rate scaling C_a^N = kappa nu log(N P(N)) with
/// nu = min(eps/(1+2 eps), 1/4). For power-law schedules the usable
/// epsilon is capped at 1/2 - omega; schedules outside the growth
/// condition raise RegimeError.
struct CaScaling {
    double nu = 0.0;
    double epsilon = 0.0; ///< effective epsilon after family cap
    double kappa = 0.0;
    PowerSchedule schedule;

    double operator()(double n) const; ///< C_a^N
};
CaScaling c_a_scaling(const PowerSchedule& schedule, double epsilon, double kappa);

} // namespace densor
