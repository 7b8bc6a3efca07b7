// SPDX-License-Identifier: Apache-2.0
#include "densor/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace densor {

namespace {

constexpr double kAxisTol = 1e-12;

std::size_t axis_index(const std::vector<double>& axis, double v) {
    // exact-match lookup with tolerance; axis is sorted
    auto it = std::lower_bound(axis.begin(), axis.end(), v - kAxisTol);
    if (it == axis.end() || std::abs(*it - v) > kAxisTol * std::max(1.0, std::abs(v))) {
        throw std::invalid_argument("tabulated kernel: sample coordinates do not form a grid");
    }
    return static_cast<std::size_t>(it - axis.begin());
}

} // namespace

KernelModel KernelModel::gauss_markov(double sigma2, double eta, double t0) {
    if (!(sigma2 > 0.0) || !(eta > 0.0) || !(t0 > 0.0)) {
        throw std::invalid_argument("gauss_markov kernel requires sigma2 > 0, eta > 0, T0 > 0");
    }
    KernelModel m;
    m.kind_ = KernelKind::gauss_markov;
    m.sigma2_ = sigma2;
    m.eta_ = eta;
    m.t0_ = t0;
    return m;
}

KernelModel KernelModel::tabulated(std::vector<double> axis, std::vector<double> values) {
    const std::size_t m = axis.size();
    if (m < 2) throw std::invalid_argument("tabulated kernel needs at least a 2x2 grid");
    if (values.size() != m * m) throw std::invalid_argument("tabulated kernel: values size != grid^2");
    if (!std::is_sorted(axis.begin(), axis.end())) {
        throw std::invalid_argument("tabulated kernel: axis must be sorted");
    }
    if (!(axis.front() >= 0.0) || !(axis.back() > axis.front())) {
        throw std::invalid_argument("tabulated kernel: axis must start at >= 0 with positive extent");
    }

    // symmetry repair: user data may be asymmetric by rounding
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            const double avg = 0.5 * (values[i * m + j] + values[j * m + i]);
            values[i * m + j] = avg;
            values[j * m + i] = avg;
        }
    }
    // autocorrelation sanity on the grid
    double diag_max = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        if (values[i * m + i] < 0.0) {
            throw std::invalid_argument("tabulated kernel: K(t,t) < 0 on the grid");
        }
        diag_max = std::max(diag_max, values[i * m + i]);
    }
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            if (std::abs(values[i * m + j]) > diag_max * (1.0 + 1e-9) + 1e-15) {
                throw std::invalid_argument("tabulated kernel: |K(t,s)| exceeds max K(t,t)");
            }
        }
    }

    KernelModel model;
    model.kind_ = KernelKind::tabulated;
    model.t0_ = axis.back();
    model.sigma2_ = diag_max; // informational for tabulated kernels
    model.eta_ = 0.0;
    model.axis_ = std::move(axis);
    model.table_ = std::move(values);
    return model;
}

KernelModel KernelModel::from_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open kernel CSV: " + path);
    return from_csv_stream(in, path);
}

KernelModel KernelModel::from_csv_stream(std::istream& in, const std::string& name) {
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument(name + ": empty kernel CSV");
    {
        std::string h = line;
        h.erase(std::remove_if(h.begin(), h.end(), [](char c) { return c == ' ' || c == '\r'; }), h.end());
        if (h != "t,s,K") throw std::invalid_argument(name + ": kernel CSV header must be `t,s,K`");
    }
    struct Sample { double t, s, k; };
    std::vector<Sample> samples;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream row(line);
        Sample smp{};
        char c1 = 0, c2 = 0;
        if (!(row >> smp.t >> c1 >> smp.s >> c2 >> smp.k) || c1 != ',' || c2 != ',') {
            throw std::invalid_argument(name + ": bad kernel CSV row at line " + std::to_string(lineno));
        }
        samples.push_back(smp);
    }
    if (samples.empty()) throw std::invalid_argument(name + ": kernel CSV has no samples");

    std::vector<double> axis;
    for (const auto& smp : samples) {
        axis.push_back(smp.t);
        axis.push_back(smp.s);
    }
    std::sort(axis.begin(), axis.end());
    axis.erase(std::unique(axis.begin(), axis.end(),
                           [](double a, double b) { return std::abs(a - b) <= kAxisTol * std::max(1.0, std::abs(b)); }),
               axis.end());

    const std::size_t m = axis.size();
    std::vector<double> table(m * m, std::numeric_limits<double>::quiet_NaN());
    for (const auto& smp : samples) {
        const std::size_t i = axis_index(axis, smp.t);
        const std::size_t j = axis_index(axis, smp.s);
        table[i * m + j] = smp.k;
    }
    // fill symmetric partner of any one-sided samples before validation
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            if (std::isnan(table[i * m + j]) && !std::isnan(table[j * m + i])) {
                table[i * m + j] = table[j * m + i];
            }
        }
    }
    for (std::size_t i = 0; i < m * m; ++i) {
        if (std::isnan(table[i])) {
            throw std::invalid_argument(name + ": kernel CSV does not cover the full t x s grid");
        }
    }
    return tabulated(std::move(axis), std::move(table));
}

double KernelModel::operator()(double t, double s) const {
    const double tol = 1e-12 * std::max(1.0, t0_);
    if (t < -tol || t > t0_ + tol || s < -tol || s > t0_ + tol) {
        throw std::domain_error("kernel_eval: coordinates outside [0, T0]");
    }
    t = std::clamp(t, 0.0, t0_);
    s = std::clamp(s, 0.0, t0_);
    if (kind_ == KernelKind::gauss_markov) {
        return sigma2_ / (2.0 * eta_) * std::exp(-eta_ * std::abs(t - s));
    }
    // bilinear interpolation on the tabulated grid
    const auto cell = [&](double v) {
        auto it = std::upper_bound(axis_.begin(), axis_.end(), v);
        std::size_t hi = std::min<std::size_t>(static_cast<std::size_t>(it - axis_.begin()), axis_.size() - 1);
        std::size_t lo = hi == 0 ? 0 : hi - 1;
        if (hi == lo) hi = lo + 1;
        const double w = (v - axis_[lo]) / (axis_[hi] - axis_[lo]);
        return std::pair<std::size_t, double>(lo, std::clamp(w, 0.0, 1.0));
    };
    const auto [i, wt] = cell(t);
    const auto [j, ws] = cell(s);
    const std::size_t m = axis_.size();
    const double k00 = table_[i * m + j];
    const double k01 = table_[i * m + j + 1];
    const double k10 = table_[(i + 1) * m + j];
    const double k11 = table_[(i + 1) * m + j + 1];
    return (1.0 - wt) * ((1.0 - ws) * k00 + ws * k01) + wt * ((1.0 - ws) * k10 + ws * k11);
}

double kernel_eval(const KernelModel& model, double t, double s) { return model(t, s); }

double mean_energy(const KernelModel& model) {
    // composite midpoint, 2e4 panels; exact for the constant GM diagonal
    constexpr std::size_t panels = 20000;
    const double t0 = model.t0();
    const double h = t0 / static_cast<double>(panels);
    double sum = 0.0;
    for (std::size_t i = 0; i < panels; ++i) {
        const double t = (static_cast<double>(i) + 0.5) * h;
        sum += model(t, t);
    }
    return sum * h / t0;
}

LipschitzAudit lipschitz_audit(const KernelModel& model, std::size_t grid_points) {
    if (grid_points < 100) throw std::invalid_argument("lipschitz_audit: grid_points >= 100 required");
    const double t0 = model.t0();
    const double h = t0 / static_cast<double>(grid_points);

    // base points in [0,T0]^2, kept coarse; separations are the fine knob
    const std::size_t n_base = 48;
    std::vector<double> base(n_base);
    for (std::size_t i = 0; i < n_base; ++i) {
        base[i] = t0 * (static_cast<double>(i) + 0.5) / static_cast<double>(n_base);
    }

    // smallest 10% of the grid separations j*h
    const std::size_t n_sep = std::max<std::size_t>(8, grid_points / 10);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

    std::vector<double> log_sep, log_gap;
    std::vector<std::pair<double, double>> sep_gap; // (distance, max |dK|)
    for (std::size_t m = 1; m <= n_sep; ++m) {
        const double delta = static_cast<double>(m) * h;
        double gmax = 0.0;
        for (double t : base) {
            for (double s : base) {
                const double k0 = model(t, s);
                // coordinate and diagonal moves, folded back into the domain
                const auto probe = [&](double tt, double ss) {
                    if (tt < 0.0 || tt > t0 || ss < 0.0 || ss > t0) return;
                    gmax = std::max(gmax, std::abs(model(tt, ss) - k0));
                };
                probe(t + delta, s);
                probe(t, s + delta);
                probe(t + delta * inv_sqrt2, s + delta * inv_sqrt2);
                probe(t + delta * inv_sqrt2, s - delta * inv_sqrt2);
            }
        }
        sep_gap.emplace_back(delta, gmax);
    }

    LipschitzAudit audit;
    double gap_peak = 0.0;
    for (const auto& [d, g] : sep_gap) gap_peak = std::max(gap_peak, g);
    double kernel_scale = 0.0;
    for (double t : base) kernel_scale = std::max(kernel_scale, std::abs(model(t, t)));
    if (gap_peak <= 1e-13 * std::max(kernel_scale, 1e-300)) {
        audit.degenerate = true; // increments at interpolation round-off: constant kernel
        return audit;
    }
    for (const auto& [d, g] : sep_gap) {
        if (g <= 0.0) continue;
        log_sep.push_back(std::log(d));
        log_gap.push_back(std::log(g));
    }
    // least-squares slope of log|dK| against log(distance)
    const std::size_t n = log_sep.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += log_sep[i];
        sy += log_gap[i];
        sxx += log_sep[i] * log_sep[i];
        sxy += log_sep[i] * log_gap[i];
    }
    const double denom = static_cast<double>(n) * sxx - sx * sx;
    audit.alpha_hat = (static_cast<double>(n) * sxy - sx * sy) / denom;
    double b = 0.0;
    for (const auto& [d, g] : sep_gap) {
        if (g > 0.0) b = std::max(b, g / std::pow(d, audit.alpha_hat));
    }
    audit.b_hat = b;
    audit.below_half = audit.alpha_hat <= 0.5;
    return audit;
}

} // namespace densor
