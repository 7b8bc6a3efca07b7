// SPDX-License-Identifier: Apache-2.0
#include "densor/class_a.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <tuple>

#include "densor/linalg.hpp"
#include "densor/sampled.hpp"

namespace densor {

namespace {

std::mutex g_spectrum_mutex;
// eigenvalues of Sigma'_n keyed by (kind tag, sigma2, eta, t0, n)
std::map<std::tuple<int, double, double, double, int>, std::vector<double>> g_spectrum_cache;

std::vector<double> sampled_spectrum(const KernelModel& model, int n) {
    const auto key = std::make_tuple(static_cast<int>(model.kind()), model.sigma2(), model.eta(),
                                     model.t0(), n);
    {
        std::lock_guard<std::mutex> lock(g_spectrum_mutex);
        auto it = g_spectrum_cache.find(key);
        if (it != g_spectrum_cache.end()) return it->second;
    }
    const SampledCovariance cov = build_sampled_covariance(model, n);
    std::vector<double> mu(cov.mu.data(), cov.mu.data() + cov.mu.size());
    std::lock_guard<std::mutex> lock(g_spectrum_mutex);
    return g_spectrum_cache.emplace(key, std::move(mu)).first->second;
}

} // namespace

void ClassAParams::validate() const {
    if (!(x > 1.0)) throw std::invalid_argument("class-A: x > 1 required");
    if (!(alpha > 0.5) || !(alpha <= 1.0)) throw std::invalid_argument("class-A: alpha in (1/2, 1] required");
    if (!(beta <= 1.0)) throw std::invalid_argument("class-A: beta <= 1 required");
    if (!(gamma <= 1.0)) throw std::invalid_argument("class-A: gamma <= 1 required");
    if (!(tau >= 0.0)) throw std::invalid_argument("class-A: tau >= 0 required");
    if (c_l < 0 || c_u < 0) throw std::invalid_argument("class-A: c_l, c_u nonnegative");
    if (k0 < c_u + 1) throw std::invalid_argument("class-A: K0 >= c_u + 1 required");
    if (!(d > 0.0)) throw std::invalid_argument("class-A: d > 0 required");
    if (!(t0 > 0.0)) throw std::invalid_argument("class-A: T0 > 0 required");
    if (head_eigenvalues.size() != static_cast<std::size_t>(k0) + 1) {
        throw std::invalid_argument("class-A: head_eigenvalues must hold lambda_0..lambda_K0");
    }
    for (std::size_t k = 0; k + 1 <= head_eigenvalues.size(); ++k) {
        if (!(head_eigenvalues[k] > 0.0)) throw std::invalid_argument("class-A: head eigenvalues positive");
        if (k + 1 < head_eigenvalues.size() && head_eigenvalues[k] < head_eigenvalues[k + 1]) {
            throw std::invalid_argument("class-A: head eigenvalues nonincreasing");
        }
    }
    // sandwich consistency beyond the head
    for (std::size_t k = static_cast<std::size_t>(k0) + 1; k < static_cast<std::size_t>(k0) + 64; ++k) {
        const auto b = spectrum_bounds(*this, k);
        if (!(b.lo <= b.hi)) throw std::invalid_argument("class-A: sandwich lo > hi");
    }
}

SpectrumBounds spectrum_bounds(const ClassAParams& params, std::size_t k) {
    if (k <= static_cast<std::size_t>(params.k0)) {
        const double head = params.head_eigenvalues[k];
        return {head, head};
    }
    const double kk = static_cast<double>(k);
    const double lo = params.d / std::pow(kk + params.c_l, params.x);
    const double hi = params.d / std::pow(kk - params.c_u, params.x);
    return {lo, hi};
}

double spectrum_midpoint(const ClassAParams& params, std::size_t k) {
    const auto b = spectrum_bounds(params, k);
    return 0.5 * (b.lo + b.hi);
}

double tail_sum_lower(const ClassAParams& params, std::size_t k_from) {
    if (k_from < static_cast<std::size_t>(params.k0)) {
        throw std::invalid_argument("tail_sum_lower: k_from must be >= K0");
    }
    // sum_{k > k_from} d/(k+c_l)^x = d sum_{m >= k_from+1+c_l} m^-x >= d/((x-1) n^{x-1})
    const double n = static_cast<double>(k_from) + 1.0 + params.c_l;
    return params.d / ((params.x - 1.0) * std::pow(n, params.x - 1.0));
}

double tail_sum_upper(const ClassAParams& params, std::size_t k_from) {
    if (k_from < static_cast<std::size_t>(params.k0)) {
        throw std::invalid_argument("tail_sum_upper: k_from must be >= K0");
    }
    // sum_{k > k_from} d/(k-c_u)^x = d sum_{m >= k_from+1-c_u} m^-x <= d/((x-1)(n-1)^{x-1})
    const double n = static_cast<double>(k_from) + 1.0 - params.c_u;
    if (n <= 1.0) throw std::invalid_argument("tail_sum_upper: k_from too small for c_u");
    return params.d / ((params.x - 1.0) * std::pow(n - 1.0, params.x - 1.0));
}

ClassAParams gm_class_a_params(double sigma2, double eta, double t0, int n_ref) {
    if (!(sigma2 > 0.0) || !(eta > 0.0) || !(t0 > 0.0)) {
        throw std::invalid_argument("gm_class_a_params: positive sigma2, eta, T0 required");
    }
    if (n_ref < 16) throw std::invalid_argument("gm_class_a_params: n_ref too small");

    const double pi2 = std::numbers::pi * std::numbers::pi;
    ClassAParams p;
    p.x = 2.0;
    p.alpha = p.beta = p.gamma = p.tau = 1.0;
    p.c_l = p.c_u = 1;
    p.d = sigma2 * t0 * t0 / pi2;
    p.t0 = t0;
    p.k0 = std::max(2, static_cast<int>(std::floor(eta * eta * t0 * t0 / pi2 - 0.75)));

    const KernelModel model = KernelModel::gauss_markov(sigma2, eta, t0);
    const auto& mu_ref = sampled_spectrum(model, n_ref);
    const auto& mu_half = sampled_spectrum(model, n_ref / 2);
    if (mu_ref.size() <= static_cast<std::size_t>(p.k0)) {
        throw std::invalid_argument("gm_class_a_params: n_ref smaller than head length");
    }
    p.head_eigenvalues.assign(mu_ref.begin(), mu_ref.begin() + p.k0 + 1);
    for (int k = 0; k <= p.k0; ++k) {
        const double rel = std::abs(mu_ref[k] - mu_half[k]) / mu_ref[k];
        if (!(rel < 1e-3)) {
            throw std::runtime_error("gm_class_a_params: head eigenvalue not converged at n_ref");
        }
    }
    p.validate();
    return p;
}

std::vector<double> reference_spectrum(const KernelModel& model, std::size_t count, int n_ref) {
    if (count > static_cast<std::size_t>(n_ref) / 2) {
        throw std::invalid_argument("reference_spectrum: count must be <= n_ref/2");
    }
    const auto& mu = sampled_spectrum(model, n_ref);
    return {mu.begin(), mu.begin() + count};
}

} // namespace densor
