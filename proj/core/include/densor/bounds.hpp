// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "densor/channel.hpp"
#include "densor/class_a.hpp"
#include "densor/kernel.hpp"
#include "densor/sampled.hpp"
#include "densor/waterfill.hpp"

namespace densor {

/// Ratio of the leading constants in the distortion lower and upper bounds:
/// pi(x, nu) = (2 nu)^{x-1} ((x^2 - x)/(x^2 - (1-log2) x + (1-log2)))^{x-1}.
double constant_ratio(double x, double nu);

/// One sweep record.
struct BoundRow {
    double n = 0.0;
    double p = 0.0; ///< P(N)
    double c_u = 0.0;
    double c_a = 0.0;
    double d_l = 0.0;
    std::optional<double> d_u;
    double d_u_err = 0.0;
    std::optional<double> d_mc;
    double d_mc_err = 0.0;
    PowerRegime regime = PowerRegime::medium;
    std::optional<double> theta_prime;
    std::string mode; ///< exact | surrogate | const | na
    bool theta_in_window = true;
};

/// Numeric knobs shared by the bound computations.
struct BoundOptions {
    double kappa = 0.99;
    double epsilon = 0.5;
    std::size_t k_max = 100000;
    int quad_panels = 8;
    int exact_max_n = 4000; ///< above this, upper_distortion switches to the spectrum surrogate
};

/// D_l^N: the distortion-rate function evaluated at the point-to-point
/// capacity of the N-antenna cut.
double lower_distortion(const ClassAParams& params, const ChannelScenario& scenario,
                        std::size_t k_max = 100000);

struct UpperDistortion {
    std::optional<double> value; ///< empty in the large-power regime
    double err = 0.0;
    std::optional<double> theta_prime;
    std::string mode; ///< exact | surrogate | const | na
    bool in_window = true;
    PowerRegime regime = PowerRegime::medium;
};

/// D_u^N: the separation-scheme distortion at the amplify-and-forward sum
/// rate. Exact mode (N <= exact_max_n) evaluates the MMSE integral on the
/// sampled covariance; surrogate mode composes the class-A spectrum
/// midpoints with the analytic grid-error bounds. Non-medium regimes return
/// a flagged constant (mean energy) or no value.
UpperDistortion upper_distortion(const KernelModel& model, const ClassAParams& params,
                                 const ChannelScenario& scenario, const BoundOptions& options);

/// Gain-field description a sweep regenerates per N.
struct GainsSpec {
    bool random = false;
    double h_lower = 1.0;
    double h_upper = 1.0;
    std::uint64_t seed = 1;

    ChannelScenario instantiate(int n, const PowerSchedule& power) const;
};

struct McOptions {
    bool enabled = false;
    std::size_t trials = 100000;
    std::optional<double> sigma_d2; ///< empty: derive from the row's theta'
    std::uint64_t seed = 1;
    int max_n = 200;       ///< skip Monte Carlo on larger rows
    int quad_per_gap = 20; ///< reconstruction nodes per sensor gap
};

/// One BoundRow per N, sorted by N. Rows are independent and computed in
/// parallel; results are deterministic.
std::vector<BoundRow> sweep(const KernelModel& model, const ClassAParams& params,
                            const PowerSchedule& power, const GainsSpec& gains,
                            const std::vector<long long>& n_list, const BoundOptions& options,
                            const McOptions& mc);

/// CSV with the fixed header
/// N,P,C_u,C_a,D_l,D_u,D_u_err,D_mc,D_mc_err,regime,theta_prime,mode.
void write_csv(std::ostream& out, const std::vector<BoundRow>& rows);

} // namespace densor
