// SPDX-License-Identifier: Apache-2.0
#include "densor/sampled.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Cholesky>

#include "densor/errors.hpp"

namespace densor {

namespace {

constexpr double kEigClampRel = 1e-10;

std::vector<double> midpoints(double a, double b, int panels) {
    std::vector<double> xs(panels);
    const double h = (b - a) / panels;
    for (int q = 0; q < panels; ++q) xs[q] = a + (q + 0.5) * h;
    return xs;
}

} // namespace

SampledCovariance build_sampled_covariance(const KernelModel& model, int n) {
    if (n < 2) throw std::invalid_argument("build_sampled_covariance: N >= 2 required");
    SampledCovariance cov;
    cov.n = n;
    cov.t0 = model.t0();
    cov.positions.resize(n);
    for (int i = 0; i < n; ++i) {
        cov.positions[i] = static_cast<double>(i) * cov.t0 / static_cast<double>(n - 1);
    }
    const double scale = cov.t0 / static_cast<double>(n - 1);
    cov.sigma_prime.resize(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            const double v = scale * model(cov.positions[i], cov.positions[j]);
            cov.sigma_prime(i, j) = v;
            cov.sigma_prime(j, i) = v;
        }
    }
    cov.mu = linalg::symmetric_eigenvalues(cov.sigma_prime);
    const double clamp_floor = -kEigClampRel * cov.mu(0);
    for (int k = 0; k < n; ++k) {
        if (cov.mu(k) < clamp_floor) {
            throw std::runtime_error("build_sampled_covariance: eigenvalue below round-off tolerance");
        }
        if (cov.mu(k) < 0.0) cov.mu(k) = 0.0;
    }
    return cov;
}

ConvergenceReport eigen_convergence_report(const KernelModel& model, const ClassAParams& params,
                                           std::span<const int> n_list, std::size_t k_max,
                                           int n_ref) {
    (void)params; // spectrum metadata callers may cross-check against
    for (int n : n_list) {
        if (static_cast<std::size_t>(n) < 2 * (k_max + 1)) {
            throw std::invalid_argument("eigen_convergence_report: each N must be >= 2 k_max");
        }
    }
    ConvergenceReport report;
    report.reference = reference_spectrum(model, k_max + 1, n_ref);

    std::vector<std::vector<double>> residuals(k_max + 1);
    for (int n : n_list) {
        const SampledCovariance cov = build_sampled_covariance(model, n);
        for (std::size_t k = 0; k <= k_max; ++k) {
            ConvergenceRow row;
            row.n = n;
            row.k = k;
            row.mu = cov.mu(static_cast<int>(k));
            row.reference = report.reference[k];
            row.residual = std::abs(row.mu - row.reference);
            residuals[k].push_back(row.residual);
            report.rows.push_back(row);
        }
    }
    report.residuals_decrease = true;
    for (const auto& r : residuals) {
        for (std::size_t i = 0; i + 1 < r.size(); ++i) {
            if (!(r[i + 1] < r[i])) report.residuals_decrease = false;
        }
    }
    // order by (k, N) for table consumers
    std::sort(report.rows.begin(), report.rows.end(), [](const ConvergenceRow& a, const ConvergenceRow& b) {
        return a.k != b.k ? a.k < b.k : a.n < b.n;
    });
    return report;
}

GridErrorTerms grid_error_terms(const KernelModel& model, int n, int quad_panels) {
    if (n < 2) throw std::invalid_argument("grid_error_terms: N >= 2 required");
    if (quad_panels < 1) throw std::invalid_argument("grid_error_terms: quad_panels >= 1 required");
    const double t0 = model.t0();
    const double gap = t0 / static_cast<double>(n - 1);
    const double w = gap / quad_panels;

    std::vector<double> pos(n);
    for (int i = 0; i < n; ++i) pos[i] = i * gap;

    double a_diag = 0.0, a_col = 0.0, b_sum = 0.0;
    std::vector<double> rho_left(n);
    for (int i = 0; i + 1 < n; ++i) {
        const double s_i = pos[i];
        for (int m = 0; m < n; ++m) rho_left[m] = model(s_i, pos[m]);
        for (double t : midpoints(s_i, pos[i + 1], quad_panels)) {
            a_diag += (model(t, t) - model(s_i, s_i)) * w;
            a_col += (rho_left[i] - model(t, pos[i])) * w;
            double norm_sq = 0.0;
            for (int m = 0; m < n; ++m) {
                const double diff = rho_left[m] - model(t, pos[m]);
                norm_sq += diff * diff;
            }
            b_sum += std::sqrt(norm_sq) * w;
        }
    }
    GridErrorTerms terms;
    terms.a_term = (a_diag + 2.0 * a_col) / t0;
    terms.b_term = 2.0 * b_sum / t0;
    return terms;
}

double achievable_rate(std::span<const double> mu, double theta_prime) {
    if (!(theta_prime > 0.0)) throw std::invalid_argument("achievable_rate: theta' > 0 required");
    double rate = 0.0;
    for (double m : mu) {
        if (m > 0.0) rate += 0.5 * std::log1p(m / theta_prime);
    }
    return rate;
}

double achievable_rate(const SampledCovariance& cov, double theta_prime) {
    return achievable_rate(std::span<const double>(cov.mu.data(), cov.mu.size()), theta_prime);
}

double d_b_of_theta(std::span<const double> mu, double theta_prime, double t0) {
    if (!(theta_prime > 0.0)) throw std::invalid_argument("d_b_of_theta: theta' > 0 required");
    double sum = 0.0;
    for (double m : mu) {
        if (m > 0.0) sum += theta_prime * m / (theta_prime + m);
    }
    return sum / t0;
}

namespace {

// (1/T0) Int (K(t,t) - (T0/(N-1)) rho^T M^{-1} rho) dt with M prefactored.
// Quadrature nodes are solved in blocks so the triangular solves stay
// matrix-matrix.
double mmse_integral(const KernelModel& model, const SampledCovariance& cov,
                     const Eigen::LLT<linalg::Matrix>& llt, int quad_panels) {
    const int n = cov.n;
    const double scale = cov.t0 / static_cast<double>(n - 1);
    const double w = scale / quad_panels;

    std::vector<double> nodes;
    nodes.reserve(static_cast<std::size_t>(n - 1) * quad_panels);
    for (int i = 0; i + 1 < n; ++i) {
        for (double t : midpoints(cov.positions[i], cov.positions[i + 1], quad_panels)) {
            nodes.push_back(t);
        }
    }

    constexpr int kBlock = 256;
    double total = 0.0;
    linalg::Matrix rho(n, kBlock);
    for (std::size_t start = 0; start < nodes.size(); start += kBlock) {
        const int cols = static_cast<int>(std::min<std::size_t>(kBlock, nodes.size() - start));
        for (int c = 0; c < cols; ++c) {
            const double t = nodes[start + c];
            for (int m = 0; m < n; ++m) rho(m, c) = model(t, cov.positions[m]);
        }
        const auto block = rho.leftCols(cols);
        const linalg::Matrix solved = llt.solve(block);
        for (int c = 0; c < cols; ++c) {
            const double t = nodes[start + c];
            total += (model(t, t) - scale * block.col(c).dot(solved.col(c))) * w;
        }
    }
    return total / cov.t0;
}

} // namespace

AchievablePoint achievable_rd_point(const KernelModel& model, const SampledCovariance& cov,
                                    double theta_prime, int quad_panels) {
    if (!(theta_prime > 0.0)) throw std::invalid_argument("achievable_rd_point: theta' > 0 required");
    if (quad_panels < 1) throw std::invalid_argument("achievable_rd_point: quad_panels >= 1 required");

    AchievablePoint pt;
    pt.theta_prime = theta_prime;
    pt.rate = achievable_rate(cov, theta_prime);
    pt.d_b = d_b_of_theta(std::span<const double>(cov.mu.data(), cov.mu.size()), theta_prime, cov.t0);

    linalg::Matrix m = cov.sigma_prime;
    m.diagonal().array() += theta_prime;
    Eigen::LLT<linalg::Matrix> llt(m);
    if (llt.info() != Eigen::Success) {
        throw std::runtime_error("achievable_rd_point: factorization of Sigma' + theta' I failed");
    }
    pt.distortion = mmse_integral(model, cov, llt, quad_panels);

    const GridErrorTerms terms = grid_error_terms(model, cov.n, quad_panels);
    pt.decomposition_ok = pt.distortion <= 2.0 * terms.a_abs() + terms.b_term + pt.d_b + 1e-12;
    return pt;
}

AchievablePoint d_a_of_rate(const KernelModel& model, const SampledCovariance& cov, double rate,
                            int quad_panels) {
    if (!(rate > 0.0)) throw std::invalid_argument("d_a_of_rate: R > 0 required");
    const double mu0 = cov.mu(0);
    if (!(mu0 > 0.0)) throw std::runtime_error("d_a_of_rate: zero covariance");
    double lo = mu0 * 1e-13;
    double hi = mu0 * 1e13;
    const double rate_max = achievable_rate(cov, lo);
    const double rate_min = achievable_rate(cov, hi);
    if (rate > rate_max || rate < rate_min) {
        throw RateRangeError("d_a_of_rate: R=" + std::to_string(rate) + " outside the supported range",
                             rate_min, rate_max);
    }
    const double tol = 1e-9 * std::max(1.0, rate);
    double mid = std::sqrt(lo * hi);
    for (int iter = 0; iter < 200; ++iter) {
        mid = std::sqrt(lo * hi);
        const double r = achievable_rate(cov, mid);
        if (std::abs(r - rate) < tol) break;
        if (r > rate) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return achievable_rd_point(model, cov, mid, quad_panels);
}

MilSplit mil_decomposition(const KernelModel& model, const SampledCovariance& cov,
                           double theta_prime, int quad_panels) {
    if (!(theta_prime > 0.0)) throw std::invalid_argument("mil_decomposition: theta' > 0 required");
    const int n = cov.n;
    const double scale = cov.t0 / static_cast<double>(n - 1);

    Eigen::LLT<linalg::Matrix> llt_sigma(cov.sigma_prime);
    if (llt_sigma.info() != Eigen::Success) {
        throw std::runtime_error("mil_decomposition: Sigma' is numerically singular at this N");
    }
    // (I/theta' + Sigma'^{-1})^{-1} applied through its factorization
    linalg::Matrix inner = llt_sigma.solve(linalg::Matrix::Identity(n, n));
    inner.diagonal().array() += 1.0 / theta_prime;
    Eigen::LLT<linalg::Matrix> llt_inner(inner);
    if (llt_inner.info() != Eigen::Success) {
        throw std::runtime_error("mil_decomposition: inner factorization failed");
    }

    const double w = scale / quad_panels;
    linalg::Vector rho(n);
    double d_s = 0.0, d_theta = 0.0;
    for (int i = 0; i + 1 < n; ++i) {
        for (double t : midpoints(cov.positions[i], cov.positions[i + 1], quad_panels)) {
            for (int m = 0; m < n; ++m) rho(m) = model(t, cov.positions[m]);
            const linalg::Vector y = llt_sigma.solve(rho); // Sigma'^{-1} rho
            d_s += (model(t, t) - scale * rho.dot(y)) * w;
            d_theta += y.dot(llt_inner.solve(y)) * w;
        }
    }
    MilSplit split;
    split.d_s = d_s / cov.t0;
    split.d_theta = d_theta / static_cast<double>(n - 1);
    return split;
}

ThetaWindow theta_window(const ClassAParams& params, int n, double target_rate, double nu,
                         double kappa) {
    if (!(target_rate > 0.0)) throw std::invalid_argument("theta_window: target rate > 0 required");
    if (!(nu > 0.0) || !(nu <= 0.25)) throw std::invalid_argument("theta_window: nu in (0, 1/4] required");
    if (!(kappa > 0.0) || !(kappa < 1.0)) throw std::invalid_argument("theta_window: kappa in (0,1) required");

    const double x = params.x;
    const double dx = std::pow(params.d, 1.0 / x);
    const double q = x * x - (1.0 - std::log(2.0)) * x + (1.0 - std::log(2.0));
    const double log_np = target_rate / (kappa * nu);

    ThetaWindow win;
    win.lower_loose = std::pow(8.0 * nu * log_np / (x * dx), -x);
    win.upper = std::pow(2.0 * (x - 1.0) * kappa * kappa * nu * log_np / (dx * q), -x / 2.0);
    win.lower = win.lower_loose / std::max(1.0, log_np);
    if (!(win.lower < win.upper)) {
        throw std::invalid_argument("theta_window: empty window at N=" + std::to_string(n) +
                                    " (increase N or the rate)");
    }
    win.rate_lo = dx * q / (2.0 * (x - 1.0) * kappa * kappa) * std::pow(win.upper, -1.0 / x);
    win.rate_hi = kappa * x * dx / 4.0 * std::pow(win.lower_loose, -1.0 / x);
    win.target_in_range = target_rate >= win.rate_lo && target_rate <= win.rate_hi;
    return win;
}

} // namespace densor
