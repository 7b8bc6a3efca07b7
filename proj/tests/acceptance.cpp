// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite: end-to-end checks of the headline quantities, one
// pass/fail line per criterion. Exit status is the number of failures.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "densor/bounds.hpp"
#include "densor/mc.hpp"
#include "densor/scenario.hpp"

namespace fs = std::filesystem;
using namespace densor;

namespace {

int g_failures = 0;

void report(int id, const std::string& label, bool ok, const std::string& detail) {
    std::printf("[%s] criterion %d: %s  (%s)\n", ok ? "PASS" : "FAIL", id, label.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

const KernelModel& unit_gm() {
    static const KernelModel model = KernelModel::gauss_markov(1.0, 1.0, 1.0);
    return model;
}

const ClassAParams& unit_params() {
    static const ClassAParams p = [] {
        ClassAParams q = gm_class_a_params(1.0, 1.0, 1.0);
        q.lipschitz_b = lipschitz_audit(unit_gm(), 10000).b_hat;
        return q;
    }();
    return p;
}

// 1. Constant-ratio reproduction
void criterion_constant_ratio() {
    const double r14 = constant_ratio(2.0, 0.25);
    const double r18 = constant_ratio(2.0, 0.125);
    const bool ok = std::abs(r14 - 0.27077) <= 1e-4 && std::abs(r18 - 0.13539) <= 1e-4;
    report(1, "constant-ratio reproduction", ok,
           "pi(2,1/4)=" + fmt(r14) + " pi(2,1/8)=" + fmt(r18));
}

// 2. Gauss-Markov eigenvalue sandwich and convergence
void criterion_sandwich() {
    const std::vector<int> ns = {250, 500, 1000, 2000};
    const auto rep = eigen_convergence_report(unit_gm(), unit_params(), ns, 30);

    double r = 0.0; // k = 0 residual at N = 2000
    for (const auto& row : rep.rows) {
        if (row.k == 0 && row.n == 2000) r = row.residual;
    }
    bool contained = true;
    for (const auto& row : rep.rows) {
        if (row.n != 2000 || row.k < 3) continue;
        const auto b = spectrum_bounds(unit_params(), row.k);
        if (!(row.mu >= b.lo - r && row.mu <= b.hi + r)) contained = false;
    }
    bool decreasing = true;
    for (std::size_t k = 0; k <= 5; ++k) {
        double prev = 1e300;
        for (int n : ns) {
            for (const auto& row : rep.rows) {
                if (row.k == k && row.n == n) {
                    if (!(row.residual < prev)) decreasing = false;
                    prev = row.residual;
                }
            }
        }
    }
    report(2, "Gauss-Markov sandwich + eigenvalue convergence", contained && decreasing,
           "slack r=" + fmt(r) + (contained ? "" : " containment FAILED") +
               (decreasing ? ", residuals strictly decreasing" : ", residual decrease FAILED"));
}

// 3. Water-filling parametric slope
void criterion_waterfill_slope() {
    const ClassAParams& p = unit_params();
    const double lam0 = p.head_eigenvalues[0];
    int checked = 0;
    double worst = 0.0;
    for (int i = 0; i < 60 && checked < 20; ++i) {
        const double theta = lam0 * 0.5 * std::pow(10.0, -4.0 * i / 59.0);
        bool near_break = false;
        for (std::size_t k = 0; k <= 4000; ++k) {
            if (std::abs(spectrum_midpoint(p, k) - theta) < 1e-4 * theta) near_break = true;
        }
        if (near_break) continue;
        const double h = 1e-6 * theta;
        const auto hi = waterfill_point(p, theta + h, 100000);
        const auto lo = waterfill_point(p, theta - h, 100000);
        const double slope = (hi.distortion - lo.distortion) / (hi.rate - lo.rate);
        worst = std::max(worst, std::abs(slope + 2.0 * theta / p.t0) / (2.0 * theta / p.t0));
        ++checked;
    }
    report(3, "water-filling slope dD/dR = -2 theta/T0", checked == 20 && worst <= 1e-4,
           "20 levels, worst relative deviation " + fmt(worst));
}

// 4. Distortion decomposition + matrix-inversion-lemma split
void criterion_decomposition() {
    bool decomposition = true;
    for (int n : {10, 50, 200}) {
        const SampledCovariance cov = build_sampled_covariance(unit_gm(), n);
        const double target = 0.99 * 0.25 * std::log(static_cast<double>(n));
        const ThetaWindow win = theta_window(unit_params(), n, target, 0.25, 0.99);
        for (int i = 0; i < 20; ++i) {
            const double theta = win.lower * std::pow(win.upper / win.lower, i / 19.0);
            if (!achievable_rd_point(unit_gm(), cov, theta, 8).decomposition_ok) decomposition = false;
        }
    }
    bool mil = true;
    double worst = 0.0;
    for (int n : {5, 20, 50}) {
        const SampledCovariance cov = build_sampled_covariance(unit_gm(), n);
        for (double theta : {0.01, 0.1, 1.0}) {
            const auto pt = achievable_rd_point(unit_gm(), cov, theta, 8);
            const auto split = mil_decomposition(unit_gm(), cov, theta, 8);
            const double rel = std::abs(split.total() - pt.distortion) / pt.distortion;
            worst = std::max(worst, rel);
            if (rel > 1e-8) mil = false;
        }
    }
    report(4, "distortion decomposition + MIL split", decomposition && mil,
           std::string(decomposition ? "bound holds on all windows" : "bound FAILED") +
               ", MIL worst rel diff " + fmt(worst));
}

// 5. Monte Carlo source-coding agreement
void criterion_mc_separation() {
    const int n = 20;
    const double sigma_d2 = 0.1;
    const int per_gap = 20;
    const McResult mc =
        simulate_separation_scheme(unit_gm(), n, sigma_d2, 100000, (n - 1) * per_gap, 2024);
    const SampledCovariance cov = build_sampled_covariance(unit_gm(), n);
    const double theta = sigma_d2 * cov.t0 / (n - 1);
    const auto analytic = achievable_rd_point(unit_gm(), cov, theta, per_gap);
    const double gap = std::abs(mc.estimate - analytic.distortion);
    const bool ok = gap <= 3.0 * mc.stderr_;
    report(5, "Monte Carlo source-coding agreement", ok,
           "empirical " + fmt(mc.estimate) + " analytic " + fmt(analytic.distortion) + " gap " +
               fmt(gap) + " (3 stderr = " + fmt(3.0 * mc.stderr_) + ")");
}

// 6. Monte Carlo amplify-and-forward agreement
void criterion_mc_af() {
    const auto scenario = ChannelScenario::constant_gains(10, 1.0, PowerSchedule::constant(1.0));
    const auto design = af_design(scenario);
    const McResult mc = simulate_af_sinr(scenario, design, 100000, 4096);
    const bool sinr_ok = std::abs(mc.estimate - 2.793) <= 3.0 * mc.stderr_;

    bool cutset_ok = true;
    for (int n : {10, 100, 1000}) {
        const auto sc = ChannelScenario::constant_gains(n, 1.0, PowerSchedule::constant(1.0));
        if (af_rate(sc, af_design(sc), 1).exact > c_upper(sc).value) cutset_ok = false;
    }
    for (std::uint64_t seed : {5ull, 55ull}) {
        const auto sc = ChannelScenario::random_gains(40, 0.5, 1.0, PowerSchedule::constant(1.0), seed);
        if (af_rate(sc, af_design(sc), 1).exact > c_upper(sc).value) cutset_ok = false;
    }
    report(6, "Monte Carlo AF agreement + cut-set ordering", sinr_ok && cutset_ok,
           "empirical SINR " + fmt(mc.estimate) + " target 2.793 (3 stderr = " +
               fmt(3.0 * mc.stderr_) + ")" + (cutset_ok ? ", af_rate <= c_upper" : ", cut-set FAILED"));
}

// 7. Scaling law of the lower bound; bound ordering across the sweep
void criterion_scaling() {
    GainsSpec gains;
    const auto rows = sweep(unit_gm(), unit_params(), PowerSchedule::constant(1.0), gains,
                            {1000, 10000, 100000, 1000000}, BoundOptions{}, McOptions{});
    std::vector<double> xs, ys;
    bool ratios_ok = true;
    double ratio_min = 1e300, ratio_max = 0.0;
    for (const auto& row : rows) {
        xs.push_back(std::log(std::log(row.n * row.p)));
        ys.push_back(std::log(row.d_l));
        if (!row.d_u.has_value()) {
            ratios_ok = false;
            continue;
        }
        const double ratio = *row.d_u / row.d_l;
        ratio_min = std::min(ratio_min, ratio);
        ratio_max = std::max(ratio_max, ratio);
        if (ratio < 1.0 || ratio > 20.0) ratios_ok = false;
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double m = static_cast<double>(xs.size());
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    const bool slope_ok = std::abs(slope + 1.0) <= 0.15;
    report(7, "lower-bound scaling law + bound ordering", slope_ok && ratios_ok,
           "slope " + fmt(slope) + " (target -1 +- 0.15), D_u/D_l in [" + fmt(ratio_min) + ", " +
               fmt(ratio_max) + "]");
}

// 8. Power-regime classification
void criterion_regimes() {
    const ClassAParams& p = unit_params();
    bool ok = classify_power_regime(PowerSchedule::constant(1.0), p, 0.5) == PowerRegime::medium &&
              classify_power_regime(PowerSchedule::linear(1.0), p, 0.5) == PowerRegime::medium &&
              classify_power_regime(PowerSchedule::power_law(0.75), p, 0.5) == PowerRegime::small &&
              classify_power_regime(PowerSchedule::power_law(1.5), p, 0.5) == PowerRegime::very_small;

    // very-small power: the lower bound stays Theta(1) and the row is flagged
    GainsSpec gains;
    const auto rows = sweep(unit_gm(), p, PowerSchedule::power_law(1.5), gains, {200, 2000},
                            BoundOptions{}, McOptions{});
    for (const auto& row : rows) {
        if (row.regime != PowerRegime::very_small) ok = false;
        if (row.mode != "const") ok = false;
        if (row.d_l < 0.35) ok = false; // does not decay toward zero
    }
    report(8, "power-regime classification", ok,
           "constant/linear medium, N^-0.75 small, N^-1.5 very-small with Theta(1) rows");
}

// 9. Determinism of the scenario runner
void criterion_determinism() {
    Scenario sc;
    sc.has_process = sc.has_power = sc.has_gains = sc.has_sweep = true;
    sc.sweep_n = {10, 20};
    sc.gains.mode = "random";
    sc.gains.h_lower = 0.5;
    sc.gains.h_upper = 1.0;
    sc.gains.seed = 7;
    sc.mc.enabled = true;
    sc.mc.trials = 500;
    sc.mc.seed = 7;

    const fs::path base = fs::temp_directory_path() / "densor_acceptance";
    fs::remove_all(base);
    const auto a = run_scenario(sc, base / "a");
    const auto b = run_scenario(sc, base / "b");
    const auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream out;
        out << in.rdbuf();
        return out.str();
    };
    const bool ok = slurp(a.csv) == slurp(b.csv) && !slurp(a.csv).empty();
    report(9, "byte-identical CSV under identical seeds", ok,
           ok ? "two runs, identical bytes" : "outputs differ");
}

} // namespace

int main() {
    std::printf("densor acceptance suite\n");
    criterion_constant_ratio();
    criterion_sandwich();
    criterion_waterfill_slope();
    criterion_decomposition();
    criterion_mc_separation();
    criterion_mc_af();
    criterion_scaling();
    criterion_regimes();
    criterion_determinism();
    if (g_failures == 0) {
        std::printf("all 9 criteria passed\n");
    } else {
        std::printf("%d criteria FAILED\n", g_failures);
    }
    return g_failures;
}
