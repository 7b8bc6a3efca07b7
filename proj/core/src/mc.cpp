// SPDX-License-Identifier: Apache-2.0
#include "densor/mc.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <thread>
#include <vector>

#include <Eigen/Cholesky>

#include "densor/linalg.hpp"
#include "densor/rng.hpp"

namespace densor {

namespace {

constexpr std::size_t kMinTrials = 100;

void run_trials(std::size_t trials, const std::function<void(std::size_t, std::size_t)>& chunk_fn) {
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t n_chunks = std::min<std::size_t>(hw, trials);
    std::vector<std::thread> workers;
    const std::size_t per = (trials + n_chunks - 1) / n_chunks;
    for (std::size_t c = 0; c < n_chunks; ++c) {
        const std::size_t begin = c * per;
        const std::size_t end = std::min(trials, begin + per);
        if (begin >= end) break;
        workers.emplace_back(chunk_fn, begin, end);
    }
    for (auto& w : workers) w.join();
}

} // namespace

double mean_square_distortion(std::span<const double> s, std::span<const double> s_hat,
                              std::span<const double> weights, double t0) {
    if (s.size() != s_hat.size() || s.size() != weights.size()) {
        throw std::invalid_argument("mean_square_distortion: size mismatch");
    }
    double sum = 0.0;
    for (std::size_t q = 0; q < s.size(); ++q) {
        const double e = s[q] - s_hat[q];
        sum += weights[q] * e * e;
    }
    return sum / t0;
}

McResult simulate_separation_scheme(const KernelModel& model, int n, double sigma_d2,
                                    std::size_t trials, int quad_points, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("simulate_separation_scheme: N >= 2 required");
    if (!(sigma_d2 > 0.0)) throw std::invalid_argument("simulate_separation_scheme: sigma_D^2 > 0 required");
    if (trials < kMinTrials) throw std::invalid_argument("simulate_separation_scheme: trials >= 100 required");
    if (quad_points < 100) throw std::invalid_argument("simulate_separation_scheme: quad_points >= 100 required");

    const double t0 = model.t0();
    const int gaps = n - 1;
    const int per_gap = (quad_points + gaps - 1) / gaps;
    const int n_quad = gaps * per_gap;
    const double gap = t0 / gaps;
    const double w_node = gap / per_gap;

    // union grid: sensors first, then per-gap midpoints
    const int m_total = n + n_quad;
    std::vector<double> grid(m_total);
    for (int i = 0; i < n; ++i) grid[i] = i * gap;
    {
        int q = n;
        for (int i = 0; i < gaps; ++i) {
            for (int p = 0; p < per_gap; ++p) grid[q++] = i * gap + (p + 0.5) * w_node;
        }
    }

    // joint covariance over the union grid, symmetric factor via eigenvectors
    linalg::Matrix joint(m_total, m_total);
    for (int i = 0; i < m_total; ++i) {
        for (int j = 0; j <= i; ++j) {
            const double v = model(grid[i], grid[j]);
            joint(i, j) = v;
            joint(j, i) = v;
        }
    }
    linalg::SymmetricEigen eig = linalg::symmetric_eigendecomposition(joint);
    const double clamp_floor = -1e-10 * std::max(1.0, eig.values(0));
    for (int k = 0; k < m_total; ++k) {
        if (eig.values(k) < clamp_floor) {
            throw std::runtime_error("simulate_separation_scheme: kernel is not positive semidefinite");
        }
        eig.values(k) = std::max(0.0, eig.values(k));
    }
    linalg::Matrix factor = eig.vectors * eig.values.cwiseSqrt().asDiagonal(); // joint = F F^T

    // MMSE weights: shat_quad = W_rec (S_sens + W), W_rec = Rho (Sigma_N + sigma_d2 I)^{-1}
    linalg::Matrix sigma_n(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) sigma_n(i, j) = joint(i, j);
    }
    sigma_n.diagonal().array() += sigma_d2;
    Eigen::LLT<linalg::Matrix> llt(sigma_n);
    if (llt.info() != Eigen::Success) {
        throw std::runtime_error("simulate_separation_scheme: test-channel covariance factorization failed");
    }
    linalg::Matrix rho_quad(n, n_quad);
    for (int q = 0; q < n_quad; ++q) {
        for (int i = 0; i < n; ++i) rho_quad(i, q) = joint(i, n + q);
    }
    const linalg::Matrix w_rec = llt.solve(rho_quad).transpose(); // n_quad x n

    std::vector<double> weights(n_quad, w_node);
    std::vector<double> per_trial(trials);
    const double sigma_d = std::sqrt(sigma_d2);

    run_trials(trials, [&](std::size_t begin, std::size_t end) {
        linalg::Vector z(m_total), t_obs(n);
        for (std::size_t trial = begin; trial < end; ++trial) {
            rng::NormalStream stream(seed, trial);
            for (int i = 0; i < m_total; ++i) z(i) = stream.next();
            const linalg::Vector sample = factor * z;
            for (int i = 0; i < n; ++i) t_obs(i) = sample(i) + sigma_d * stream.next();
            const linalg::Vector s_hat = w_rec * t_obs;
            per_trial[trial] = mean_square_distortion(
                std::span<const double>(sample.data() + n, static_cast<std::size_t>(n_quad)),
                std::span<const double>(s_hat.data(), static_cast<std::size_t>(n_quad)),
                weights, t0);
        }
    });

    const auto [mean, se] = linalg::mean_and_stderr(per_trial);
    McResult result;
    result.estimate = mean;
    result.stderr_ = se;
    result.trials = trials;
    result.seed = seed;
    return result;
}

McResult simulate_af_sinr(const ChannelScenario& scenario, const AfDesign& design,
                          std::size_t trials, std::uint64_t seed, double noise_scale, int node) {
    if (trials < kMinTrials) throw std::invalid_argument("simulate_af_sinr: trials >= 100 required");
    if (!design.feasible) throw std::invalid_argument("simulate_af_sinr: infeasible design");
    const int n = scenario.n();
    if (node < 1 || node > n) throw std::invalid_argument("simulate_af_sinr: node out of range");
    const double p = scenario.total_power();

    double signal_coeff = 0.0;
    std::vector<double> noise_coeff; // per relay, then unit collector noise
    noise_coeff.reserve(n - 1);
    for (int j = 1; j <= n; ++j) {
        if (j == node) continue;
        const double b = design.beta(scenario, node, j);
        const double h_j0 = scenario.collector_gain(j);
        signal_coeff += b * scenario.relay_gain(node, j) * h_j0;
        noise_coeff.push_back(b * h_j0);
    }

    McResult result;
    result.trials = trials;
    result.seed = seed;
    if (noise_scale == 0.0) {
        result.infinite = true;
        result.beamforming_gain = signal_coeff * signal_coeff * p;
        return result;
    }

    std::vector<double> sig_sq(trials), noise_sq(trials);
    const double sqrt_p = std::sqrt(p);
    run_trials(trials, [&](std::size_t begin, std::size_t end) {
        for (std::size_t trial = begin; trial < end; ++trial) {
            rng::NormalStream stream(seed, trial);
            const double x = sqrt_p * stream.next();
            double noise = 0.0;
            for (double c : noise_coeff) noise += c * noise_scale * stream.next();
            noise += noise_scale * stream.next(); // collector noise
            const double s = signal_coeff * x;
            sig_sq[trial] = s * s;
            noise_sq[trial] = noise * noise;
        }
    });

    // ratio of sample variances (means are zero by construction; keep the
    // centering anyway so the stderr is the honest delta-method value)
    const double sig_mean = linalg::pairwise_sum(sig_sq) / trials;
    const double noise_mean = linalg::pairwise_sum(noise_sq) / trials;
    const double ratio = sig_mean / noise_mean;

    // influence values g_t = (a_t - ratio b_t)/mean(b); stderr = sd(g)/sqrt(T)
    std::vector<double> influence(trials);
    for (std::size_t t = 0; t < trials; ++t) {
        influence[t] = (sig_sq[t] - ratio * noise_sq[t]) / noise_mean;
    }
    const auto [imean, ise] = linalg::mean_and_stderr(influence);
    result.estimate = ratio + imean; // imean is 0 up to round-off
    result.stderr_ = ise;
    return result;
}

} // namespace densor
