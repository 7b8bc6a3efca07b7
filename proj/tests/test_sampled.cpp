// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <span>
#include <vector>

#include "densor/errors.hpp"
#include "densor/sampled.hpp"

using densor::ClassAParams;
using densor::KernelModel;
using densor::SampledCovariance;

namespace {

const KernelModel& unit_gm() {
    static const KernelModel model = KernelModel::gauss_markov(1.0, 1.0, 1.0);
    return model;
}

const ClassAParams& unit_params() {
    static const ClassAParams p = densor::gm_class_a_params(1.0, 1.0, 1.0);
    return p;
}

KernelModel constant_kernel(double c) {
    std::vector<double> axis = {0.0, 0.25, 0.5, 0.75, 1.0};
    return KernelModel::tabulated(axis, std::vector<double>(25, c));
}

// window of interest for the unit process at count n with P(N) = 1
densor::ThetaWindow unit_window(int n) {
    const double target = 0.99 * 0.25 * std::log(static_cast<double>(n));
    return densor::theta_window(unit_params(), n, target, 0.25, 0.99);
}

} // namespace

// ---------------------------------------------------------------------------
// build_sampled_covariance
// ---------------------------------------------------------------------------

TEST_CASE("two-sensor covariance matches the closed form") {
    const SampledCovariance cov = densor::build_sampled_covariance(unit_gm(), 2);
    // T0/(N-1) = 1
    CHECK(cov.sigma_prime(0, 0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(cov.sigma_prime(1, 1) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(cov.sigma_prime(0, 1) == doctest::Approx(0.5 * std::exp(-1.0)).epsilon(1e-15));

    // 2x2 eigenvalue oracle: a +- b on a symmetric [[a,b],[b,a]]
    CHECK(cov.mu(0) == doctest::Approx(0.5 * (1.0 + std::exp(-1.0))).epsilon(1e-13));
    CHECK(cov.mu(1) == doctest::Approx(0.5 * (1.0 - std::exp(-1.0))).epsilon(1e-13));
    CHECK(cov.mu(0) == doctest::Approx(0.683940).epsilon(1e-6));
    CHECK(cov.mu(1) == doctest::Approx(0.316060).epsilon(1e-6));
}

TEST_CASE("trace identity at several sizes") {
    for (int n : {3, 7, 50, 333}) {
        const SampledCovariance cov = densor::build_sampled_covariance(unit_gm(), n);
        double diag = 0.0;
        for (int i = 0; i < n; ++i) diag += unit_gm()(cov.positions[i], cov.positions[i]);
        const double expect = cov.t0 / (n - 1) * diag;
        CHECK(cov.mu.sum() == doctest::Approx(expect).epsilon(1e-10));
        CHECK(cov.trace() == doctest::Approx(expect).epsilon(1e-12));
    }
    // N=3: trace = (1/2) * 3 * 0.5 = 0.75
    const SampledCovariance c3 = densor::build_sampled_covariance(unit_gm(), 3);
    CHECK(c3.mu.sum() == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("eigenvalues are clamped nonnegative") {
    const SampledCovariance cov = densor::build_sampled_covariance(unit_gm(), 200);
    for (int k = 0; k < cov.n; ++k) CHECK(cov.mu(k) >= 0.0);
    CHECK_THROWS_AS(densor::build_sampled_covariance(unit_gm(), 1), std::invalid_argument);
}

TEST_CASE("constant kernel gives a rank-1 covariance") {
    const double c = 0.4;
    const int n = 25;
    const SampledCovariance cov = densor::build_sampled_covariance(constant_kernel(c), n);
    CHECK(cov.mu(0) == doctest::Approx(c * cov.t0 * n / (n - 1.0)).epsilon(1e-10));
    for (int k = 1; k < n; ++k) CHECK(cov.mu(k) <= 1e-12 * cov.mu(0));
}

// ---------------------------------------------------------------------------
// eigen_convergence_report
// ---------------------------------------------------------------------------

TEST_CASE("leading eigenvalue residual decreases as N doubles") {
    const std::vector<int> ns = {100, 200, 400};
    const auto report = densor::eigen_convergence_report(unit_gm(), unit_params(), ns, 0);
    REQUIRE(report.rows.size() == 3);
    CHECK(report.rows[0].residual > report.rows[1].residual);
    CHECK(report.rows[1].residual > report.rows[2].residual);
    CHECK(report.residuals_decrease);
}

TEST_CASE("modes up to k=5 sit inside the slack-padded sandwich at N=2000") {
    const std::vector<int> ns = {2000};
    const auto report = densor::eigen_convergence_report(unit_gm(), unit_params(), ns, 5);
    const double r = report.rows[0].residual; // k = 0 residual
    for (const auto& row : report.rows) {
        const auto b = densor::spectrum_bounds(unit_params(), row.k);
        CHECK(row.mu >= b.lo - r);
        CHECK(row.mu <= b.hi + r);
    }
}

TEST_CASE("convergence report rejects N too small for k_max") {
    const std::vector<int> ns = {10};
    CHECK_THROWS_AS(densor::eigen_convergence_report(unit_gm(), unit_params(), ns, 8),
                    std::invalid_argument);
}

// ---------------------------------------------------------------------------
// grid_error_terms
// ---------------------------------------------------------------------------

TEST_CASE("constant kernel has no grid error") {
    const auto terms = densor::grid_error_terms(constant_kernel(0.9), 12, 16);
    CHECK(terms.a_term == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(terms.b_term == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("A-term obeys the Lipschitz bound") {
    const auto audit = densor::lipschitz_audit(unit_gm(), 10000);
    for (int n : {10, 50, 200}) {
        const auto terms = densor::grid_error_terms(unit_gm(), n, 16);
        const double bound = audit.b_hat * (std::pow(2.0, 0.5) + 2.0) / (n - 1.0);
        CHECK(terms.a_abs() <= bound);
        CHECK(terms.b_term >= 0.0);
    }
}

TEST_CASE("A-term halves when N doubles") {
    for (int n : {16, 64, 256}) {
        const double a1 = densor::grid_error_terms(unit_gm(), n, 16).a_abs();
        const double a2 = densor::grid_error_terms(unit_gm(), 2 * n, 16).a_abs();
        // alpha = 1: ratio within [2^-alpha / 2, 2^-alpha * 2]
        CHECK(a2 / a1 >= 0.25);
        CHECK(a2 / a1 <= 1.0);
    }
}

// ---------------------------------------------------------------------------
// achievable_rd_point
// ---------------------------------------------------------------------------

TEST_CASE("infinite water level transmits nothing") {
    const SampledCovariance cov = densor::build_sampled_covariance(unit_gm(), 40);
    const auto pt = densor::achievable_rd_point(unit_gm(), cov, 1e12, 8);
    CHECK(pt.rate <= 1e-10);
    CHECK(pt.distortion == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("two-sensor distortion matches an independent dense-grid oracle") {
    const SampledCovariance cov = densor::build_sampled_covariance(unit_gm(), 2);
    const double theta = 0.1;
    const int panels = 64;

    // oracle: explicit 2x2 inverse of (Sigma' + theta I), same midpoint grid
    const double a = cov.sigma_prime(0, 0) + theta;
    const double b = cov.sigma_prime(0, 1);
    const double det = a * a - b * b;
    double oracle = 0.0;
    const double w = 1.0 / panels;
    for (int q = 0; q < panels; ++q) {
        const double t = (q + 0.5) * w;
        const double r0 = unit_gm()(t, 0.0);
        const double r1 = unit_gm()(t, 1.0);
        const double quad = (a * (r0 * r0 + r1 * r1) - 2.0 * b * r0 * r1) / det;
        oracle += (unit_gm()(t, t) - quad) * w; // T0/(N-1) = 1
    }

    const auto pt = densor::achievable_rd_point(unit_gm(), cov, theta, panels);
    CHECK(pt.distortion == doctest::Approx(oracle).epsilon(1e-8));
}

TEST_CASE("distortion decomposition bound holds across the window") {
    for (int n : {10, 50, 200}) {
        const SampledCovariance cov = densor::build_sampled_covariance(unit_gm(), n);
        const auto win = unit_window(n);
        for (int i = 0; i < 20; ++i) {
            const double theta =
                win.lower * std::pow(win.upper / win.lower, i / 19.0);
            const auto pt = densor::achievable_rd_point(unit_gm(), cov, theta, 8);
            CHECK(pt.decomposition_ok);
        }
    }
}

TEST_CASE("rate decreases and distortion increases in theta") {
    const SampledCovariance cov = densor::build_sampled_covariance(unit_gm(), 60);
    double prev_rate = 1e300, prev_dist = -1.0;
    for (int i = 0; i < 20; ++i) {
        const double theta = 1e-4 * std::pow(1e5, i / 19.0);
        const auto pt = densor::achievable_rd_point(unit_gm(), cov, theta, 4);
        CHECK(pt.rate < prev_rate - 1e-12);
        CHECK(pt.distortion >= prev_dist - 1e-12);
        prev_rate = pt.rate;
        prev_dist = pt.distortion;
    }
}

TEST_CASE("D_b is dominated by both pinch-offs") {
    const SampledCovariance cov = densor::build_sampled_covariance(unit_gm(), 80);
    const std::span<const double> mu(cov.mu.data(), cov.mu.size());
    for (double theta : {1e-6, 1e-3, 0.1, 10.0}) {
        const double db = densor::d_b_of_theta(mu, theta, cov.t0);
        CHECK(db <= cov.n * theta / cov.t0 + 1e-15);
        CHECK(db <= cov.mu.sum() / cov.t0 + 1e-15);
    }
}

// ---------------------------------------------------------------------------
// d_a_of_rate
// ---------------------------------------------------------------------------

TEST_CASE("rate inversion round trip") {
    const SampledCovariance cov = densor::build_sampled_covariance(unit_gm(), 50);
    const double theta0 = 0.02;
    const auto fwd = densor::achievable_rd_point(unit_gm(), cov, theta0, 8);
    const auto inv = densor::d_a_of_rate(unit_gm(), cov, fwd.rate, 8);
    CHECK(inv.theta_prime == doctest::Approx(theta0).epsilon(1e-7));
    CHECK(inv.distortion == doctest::Approx(fwd.distortion).epsilon(1e-8));
}

TEST_CASE("distortion of rate is nonincreasing") {
    const SampledCovariance cov = densor::build_sampled_covariance(unit_gm(), 50);
    double prev = 1e300;
    for (int i = 0; i < 20; ++i) {
        const double r = 0.2 + 0.4 * i;
        const double d = densor::d_a_of_rate(unit_gm(), cov, r, 4).distortion;
        CHECK(d <= prev + 1e-12);
        prev = d;
    }
}

TEST_CASE("rate out of range reports the achievable interval") {
    const SampledCovariance cov = densor::build_sampled_covariance(unit_gm(), 10);
    try {
        (void)densor::d_a_of_rate(unit_gm(), cov, 1e6, 4);
        FAIL("expected RateRangeError");
    } catch (const densor::RateRangeError& e) {
        CHECK(e.rate_min() >= 0.0);
        CHECK(e.rate_max() > e.rate_min());
        CHECK(e.rate_max() < 1e6);
    }
}

// ---------------------------------------------------------------------------
// matrix-inversion-lemma split
// ---------------------------------------------------------------------------

TEST_CASE("MIL split reproduces the direct integral at small N") {
    for (int n : {5, 20, 50}) {
        const SampledCovariance cov = densor::build_sampled_covariance(unit_gm(), n);
        for (double theta : {0.01, 0.1, 1.0}) {
            const auto pt = densor::achievable_rd_point(unit_gm(), cov, theta, 8);
            const auto split = densor::mil_decomposition(unit_gm(), cov, theta, 8);
            CHECK(split.total() == doctest::Approx(pt.distortion).epsilon(1e-8));
            CHECK(split.d_s >= -1e-12);
            CHECK(split.d_theta >= -1e-12);
        }
    }
}

// ---------------------------------------------------------------------------
// theta_window
// ---------------------------------------------------------------------------

TEST_CASE("window is nonempty and ordered at practical sizes") {
    for (int n : {10, 100, 1000, 100000}) {
        const auto win = unit_window(n);
        CHECK(win.lower > 0.0);
        CHECK(win.lower < win.lower_loose);
        CHECK(win.lower_loose < win.upper);
        CHECK(win.rate_lo < win.rate_hi);
    }
}

TEST_CASE("upper edge vanishes as N grows") {
    double prev = 1e300;
    for (int n : {1000, 2000, 4000, 8000, 16000}) {
        const auto win = unit_window(n);
        CHECK(win.upper < prev);
        prev = win.upper;
    }
}

TEST_CASE("loose lower sequence decays slower than N^-1/2") {
    // vartheta_LL * N^{1/2} must diverge for the unit process (exponent 1/2)
    double prev = 0.0;
    for (double n : {1e3, 1e4, 1e5, 1e6}) {
        const double target = 0.99 * 0.25 * std::log(n);
        const auto win = densor::theta_window(unit_params(), static_cast<int>(n), target, 0.25, 0.99);
        const double value = win.lower_loose * std::sqrt(n);
        CHECK(value > prev);
        prev = value;
    }
}

TEST_CASE("window flags rates outside the valid interval") {
    const auto win = unit_window(500);
    const double target = 0.99 * 0.25 * std::log(500.0);
    CHECK(win.target_in_range == (target >= win.rate_lo && target <= win.rate_hi));
    CHECK(win.target_in_range);
    // the interval's lower edge shrinks only like sqrt(target): a small
    // target rate falls below it while the window itself stays nonempty
    const auto low = densor::theta_window(unit_params(), 500, 0.5, 0.25, 0.99);
    CHECK(low.lower < low.upper);
    CHECK_FALSE(low.target_in_range);
}

TEST_CASE("tiny target rate empties the window") {
    CHECK_THROWS_AS(densor::theta_window(unit_params(), 4, 1e-4, 0.25, 0.99),
                    std::invalid_argument);
}

// ---------------------------------------------------------------------------
// tail-of-spectrum bound (empirical form of the divergence lemma)
// ---------------------------------------------------------------------------

TEST_CASE("non-converged eigenvalue mass stays below the class-A tail bound") {
    const ClassAParams& p = unit_params();
    const double kappa = 0.9;
    const SampledCovariance cov = densor::build_sampled_covariance(unit_gm(), 500);
    const auto win = unit_window(500);
    for (int i = 0; i < 10; ++i) {
        const double theta = win.lower * std::pow(win.upper / win.lower, i / 9.0);
        const auto cut = static_cast<std::size_t>(std::floor(std::pow(p.d / theta, 1.0 / p.x) + p.c_u));
        double tail = 0.0;
        for (int k = static_cast<int>(cut) + 1; k < cov.n; ++k) tail += cov.mu(k);
        const double bound = std::pow(p.d, 1.0 / p.x) / ((p.x - 1.0) * kappa * kappa) *
                             std::pow(theta, 1.0 - 1.0 / p.x);
        CHECK(tail <= bound);
    }
}
