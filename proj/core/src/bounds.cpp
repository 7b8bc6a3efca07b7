// SPDX-License-Identifier: Apache-2.0
#include "densor/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <ostream>
#include <span>
#include <stdexcept>

#include "densor/errors.hpp"
#include "densor/mc.hpp"

namespace densor {

double constant_ratio(double x, double nu) {
    if (!(x > 1.0)) throw std::invalid_argument("constant_ratio: x > 1 required");
    if (!(nu > 0.0) || !(nu <= 0.25)) throw std::invalid_argument("constant_ratio: nu in (0, 1/4] required");
    const double q = x * x - (1.0 - std::log(2.0)) * x + (1.0 - std::log(2.0));
    return std::pow(2.0 * nu * (x * x - x) / q, x - 1.0);
}

double lower_distortion(const ClassAParams& params, const ChannelScenario& scenario,
                        std::size_t k_max) {
    const CapacityBound cu = c_upper(scenario);
    return dp_of_rate(params, cu.value, k_max).distortion;
}

namespace {

// spectrum-midpoint surrogate for mu_k^{(N)'}, k = 0..n-1
std::vector<double> surrogate_spectrum(const ClassAParams& params, int n) {
    std::vector<double> lam(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) lam[k] = spectrum_midpoint(params, static_cast<std::size_t>(k));
    return lam;
}

double invert_rate(std::span<const double> mu, double target, double mu0) {
    double lo = mu0 * 1e-13, hi = mu0 * 1e13;
    const double rate_max = achievable_rate(mu, lo);
    const double rate_min = achievable_rate(mu, hi);
    if (target > rate_max || target < rate_min) {
        throw RateRangeError("surrogate rate inversion: target outside range", rate_min, rate_max);
    }
    double mid = std::sqrt(lo * hi);
    const double tol = 1e-9 * std::max(1.0, target);
    for (int iter = 0; iter < 200; ++iter) {
        mid = std::sqrt(lo * hi);
        const double r = achievable_rate(mu, mid);
        if (std::abs(r - target) < tol) break;
        if (r > target) lo = mid;
        else hi = mid;
    }
    return mid;
}

} // namespace

UpperDistortion upper_distortion(const KernelModel& model, const ClassAParams& params,
                                 const ChannelScenario& scenario, const BoundOptions& options) {
    UpperDistortion out;
    out.regime = classify_power_regime(scenario.power(), params, options.epsilon);
    if (out.regime == PowerRegime::large) {
        out.mode = "na"; // no upper bound available in this regime
        return out;
    }
    if (out.regime != PowerRegime::medium) {
        out.value = mean_energy(model); // blind zero estimate; distortion stays Theta(1)
        out.mode = "const";
        return out;
    }

    const int n = scenario.n();
    const CaScaling ca = c_a_scaling(scenario.power(), options.epsilon, options.kappa);
    const double target = ca(static_cast<double>(n));
    const ThetaWindow window = theta_window(params, n, target, ca.nu, ca.kappa);

    if (n <= options.exact_max_n) {
        const SampledCovariance cov = build_sampled_covariance(model, n);
        AchievablePoint pt = d_a_of_rate(model, cov, target, options.quad_panels);
        out.value = pt.distortion;
        out.theta_prime = pt.theta_prime;
        out.mode = "exact";
        if (options.quad_panels >= 2) {
            // quadrature self-estimate: change under halved panel count
            const AchievablePoint coarse =
                achievable_rd_point(model, cov, pt.theta_prime, options.quad_panels / 2);
            out.err = std::abs(pt.distortion - coarse.distortion);
        }
        out.in_window = pt.theta_prime >= window.lower && pt.theta_prime <= window.upper;
        return out;
    }

    // spectrum surrogate: class-A midpoints for mu, analytic grid-error bounds
    const std::vector<double> lam = surrogate_spectrum(params, n);
    const double theta = invert_rate(lam, target, lam[0]);
    const double d_b = d_b_of_theta(lam, theta, params.t0);
    const double b_const = params.lipschitz_b.value_or(1.0);
    const double n1 = static_cast<double>(n - 1);
    const double a_bound = b_const * (std::pow(2.0, params.alpha / 2.0) + 2.0) *
                           std::pow(params.t0, params.alpha) / std::pow(n1, params.alpha);
    const double b_bound = 2.0 * b_const * std::pow(params.t0, params.alpha) *
                           std::sqrt(static_cast<double>(n)) / std::pow(n1, params.alpha);
    out.value = 2.0 * a_bound + b_bound + d_b;
    out.theta_prime = theta;
    out.mode = "surrogate";
    out.in_window = theta >= window.lower && theta <= window.upper;
    return out;
}

ChannelScenario GainsSpec::instantiate(int n, const PowerSchedule& power) const {
    if (random) return ChannelScenario::random_gains(n, h_lower, h_upper, power, seed);
    if (h_lower != h_upper) {
        throw std::invalid_argument("constant gains require h_lower == h_upper");
    }
    return ChannelScenario::constant_gains(n, h_upper, power);
}

std::vector<BoundRow> sweep(const KernelModel& model, const ClassAParams& params,
                            const PowerSchedule& power, const GainsSpec& gains,
                            const std::vector<long long>& n_list, const BoundOptions& options,
                            const McOptions& mc) {
    if (n_list.empty()) throw std::invalid_argument("sweep: nonempty N list required");

    std::vector<long long> ns = n_list;
    std::sort(ns.begin(), ns.end());

    const auto compute_row = [&](long long n_ll) {
        const int n = static_cast<int>(n_ll);
        const ChannelScenario scenario = gains.instantiate(n, power);
        BoundRow row;
        row.n = static_cast<double>(n_ll);
        row.p = scenario.total_power();
        row.regime = classify_power_regime(power, params, options.epsilon);
        row.c_u = c_upper(scenario).value;
        row.c_a = 0.0;
        if (row.regime == PowerRegime::medium || row.regime == PowerRegime::large) {
            row.c_a = c_a_scaling(power, options.epsilon, options.kappa)(static_cast<double>(n));
        }
        row.d_l = lower_distortion(params, scenario, options.k_max);
        const UpperDistortion du = upper_distortion(model, params, scenario, options);
        row.d_u = du.value;
        row.d_u_err = du.err;
        row.theta_prime = du.theta_prime;
        row.mode = du.mode;
        row.theta_in_window = du.in_window;

        if (mc.enabled && n <= mc.max_n && du.theta_prime.has_value()) {
            const double theta = *du.theta_prime;
            const double sigma_d2 =
                mc.sigma_d2.value_or(theta * static_cast<double>(n - 1) / params.t0);
            const int quad_points = std::max(100, (n - 1) * mc.quad_per_gap);
            const McResult res =
                simulate_separation_scheme(model, n, sigma_d2, mc.trials, quad_points, mc.seed);
            row.d_mc = res.estimate;
            row.d_mc_err = res.stderr_;
        }
        return row;
    };

    std::vector<std::future<BoundRow>> futures;
    futures.reserve(ns.size());
    for (long long n : ns) {
        futures.push_back(std::async(std::launch::async, compute_row, n));
    }
    std::vector<BoundRow> rows;
    rows.reserve(ns.size());
    for (auto& f : futures) rows.push_back(f.get());
    return rows;
}

namespace {

void append_value(std::string& line, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    line += buf;
}

void append_optional(std::string& line, const std::optional<double>& v) {
    if (v.has_value()) append_value(line, *v);
    else line += "na";
}

} // namespace

void write_csv(std::ostream& out, const std::vector<BoundRow>& rows) {
    out << "N,P,C_u,C_a,D_l,D_u,D_u_err,D_mc,D_mc_err,regime,theta_prime,mode\n";
    for (const BoundRow& row : rows) {
        std::string line;
        append_value(line, row.n);
        line += ',';
        append_value(line, row.p);
        line += ',';
        append_value(line, row.c_u);
        line += ',';
        append_value(line, row.c_a);
        line += ',';
        append_value(line, row.d_l);
        line += ',';
        append_optional(line, row.d_u);
        line += ',';
        append_value(line, row.d_u_err);
        line += ',';
        append_optional(line, row.d_mc);
        line += ',';
        append_value(line, row.d_mc_err);
        line += ',';
        line += to_string(row.regime);
        line += ',';
        append_optional(line, row.theta_prime);
        line += ',';
        line += row.mode;
        line += '\n';
        out << line;
    }
}

} // namespace densor
