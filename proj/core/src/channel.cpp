// SPDX-License-Identifier: Apache-2.0
#include "densor/channel.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "densor/errors.hpp"
#include "densor/rng.hpp"

namespace densor {

double PowerSchedule::operator()(double n) const {
    switch (family) {
        case PowerFamily::constant: return p_tot;
        case PowerFamily::linear: return n * p_ind;
        case PowerFamily::power_law: return std::pow(n, -omega);
        case PowerFamily::near_exponential: return std::exp(std::pow(n, growth_c)) / n;
    }
    throw std::logic_error("unknown power family");
}

std::string PowerSchedule::describe() const {
    std::ostringstream out;
    switch (family) {
        case PowerFamily::constant: out << "P(N) = " << p_tot; break;
        case PowerFamily::linear: out << "P(N) = N * " << p_ind; break;
        case PowerFamily::power_law: out << "P(N) = N^-" << omega; break;
        case PowerFamily::near_exponential: out << "P(N) = exp(N^" << growth_c << ")/N"; break;
    }
    return out.str();
}

PowerSchedule PowerSchedule::constant(double p_tot) {
    if (!(p_tot > 0.0)) throw std::invalid_argument("constant schedule: P_tot > 0 required");
    PowerSchedule s;
    s.family = PowerFamily::constant;
    s.p_tot = p_tot;
    return s;
}

PowerSchedule PowerSchedule::linear(double p_ind) {
    if (!(p_ind > 0.0)) throw std::invalid_argument("linear schedule: P_ind > 0 required");
    PowerSchedule s;
    s.family = PowerFamily::linear;
    s.p_ind = p_ind;
    return s;
}

PowerSchedule PowerSchedule::power_law(double omega) {
    if (!(omega > 0.0)) throw std::invalid_argument("power-law schedule: omega > 0 required");
    PowerSchedule s;
    s.family = PowerFamily::power_law;
    s.omega = omega;
    return s;
}

PowerSchedule PowerSchedule::near_exponential(double c) {
    if (!(c > 0.0)) throw std::invalid_argument("near-exponential schedule: c > 0 required");
    PowerSchedule s;
    s.family = PowerFamily::near_exponential;
    s.growth_c = c;
    return s;
}

const char* to_string(PowerRegime r) {
    switch (r) {
        case PowerRegime::very_small: return "very-small";
        case PowerRegime::small: return "small";
        case PowerRegime::medium: return "medium";
        case PowerRegime::large: return "large";
    }
    return "?";
}

double medium_regime_exponent(const ClassAParams& params) {
    const double t1 = params.tau > 0.0 ? params.gamma / (2.0 * params.tau)
                                       : std::numeric_limits<double>::infinity();
    const double t2 = (2.0 * params.alpha - 1.0) / (2.0 * (params.x - 1.0));
    const double t3 = params.beta / (params.x + params.tau + 1.0);
    return std::min({t1, t2, t3});
}

PowerRegime classify_power_regime(const PowerSchedule& schedule, const ClassAParams& params,
                                  double epsilon) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("classify_power_regime: epsilon > 0 required");
    // lim 1/(N P(N)) = 0 ?
    bool np_grows = true;
    // exists eps > 0 with lim P(N) N^{1/2-eps} > 1 ?
    bool rate_grows = true;
    // lim N P(N) / exp(N^cmin) = 0 ?
    bool below_ceiling = true;
    switch (schedule.family) {
        case PowerFamily::constant:
        case PowerFamily::linear:
            break;
        case PowerFamily::power_law:
            np_grows = schedule.omega < 1.0;
            rate_grows = schedule.omega < 0.5;
            break;
        case PowerFamily::near_exponential:
            below_ceiling = schedule.growth_c < medium_regime_exponent(params);
            break;
    }
    if (!np_grows) return PowerRegime::very_small;
    if (!rate_grows) return PowerRegime::small;
    if (!below_ceiling) return PowerRegime::large;
    return PowerRegime::medium;
}

ChannelScenario ChannelScenario::constant_gains(int n, double h, PowerSchedule power) {
    if (n < 1) throw std::invalid_argument("scenario: N >= 1 required");
    if (!(h > 0.0) || !(h <= 1.0)) throw std::invalid_argument("scenario: gain in (0, 1] required");
    ChannelScenario s;
    s.n_ = n;
    s.h_lower_ = s.h_upper_ = h;
    s.power_ = power;
    return s;
}

ChannelScenario ChannelScenario::random_gains(int n, double h_lower, double h_upper,
                                              PowerSchedule power, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("scenario: N >= 1 required");
    if (!(h_lower > 0.0) || !(h_lower <= h_upper) || !(h_upper <= 1.0)) {
        throw std::invalid_argument("scenario: 0 < h_lower <= h_upper <= 1 required");
    }
    ChannelScenario s;
    s.n_ = n;
    s.h_lower_ = h_lower;
    s.h_upper_ = h_upper;
    s.random_ = true;
    s.seed_ = seed;
    s.power_ = power;
    return s;
}

ChannelScenario ChannelScenario::from_csv(const std::string& path, PowerSchedule power) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open gains CSV: " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument(path + ": empty gains CSV");
    {
        std::string h = line;
        std::erase_if(h, [](char c) { return c == ' ' || c == '\r'; });
        if (h != "i,j,h") throw std::invalid_argument(path + ": gains CSV header must be `i,j,h`");
    }
    struct Row { int i, j; double h; };
    std::vector<Row> rows;
    int n = 0;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream rs(line);
        Row r{};
        char c1 = 0, c2 = 0;
        if (!(rs >> r.i >> c1 >> r.j >> c2 >> r.h) || c1 != ',' || c2 != ',') {
            throw std::invalid_argument(path + ": bad gains row at line " + std::to_string(lineno));
        }
        n = std::max({n, r.i, r.j});
        rows.push_back(r);
    }
    if (n < 1) throw std::invalid_argument(path + ": no gain rows");

    ChannelScenario s;
    s.n_ = n;
    s.power_ = power;
    s.explicit_collector_.emplace(n, 0.0);
    s.explicit_relay_.emplace(linalg::Matrix::Zero(n, n));
    double h_lo = 1.0, h_hi = 0.0;
    for (const Row& r : rows) {
        if (r.i < 1 || r.i > n || r.j < 0 || r.j > n) {
            throw std::invalid_argument(path + ": gain index out of range");
        }
        if (!(r.h > 0.0) || !(r.h <= 1.0)) throw std::invalid_argument(path + ": gain outside (0, 1]");
        if (r.j == 0) {
            (*s.explicit_collector_)[r.i - 1] = r.h;
        } else {
            (*s.explicit_relay_)(r.i - 1, r.j - 1) = r.h;
        }
        h_lo = std::min(h_lo, r.h);
        h_hi = std::max(h_hi, r.h);
    }
    for (int i = 0; i < n; ++i) {
        if ((*s.explicit_collector_)[i] == 0.0) {
            throw std::invalid_argument(path + ": missing collector gain for node " + std::to_string(i + 1));
        }
    }
    s.h_lower_ = h_lo;
    s.h_upper_ = h_hi;
    return s;
}

double ChannelScenario::collector_gain(int i) const {
    if (i < 1 || i > n_) throw std::invalid_argument("collector_gain: node index out of range");
    if (explicit_collector_) return (*explicit_collector_)[i - 1];
    if (!random_) return h_upper_;
    const std::uint64_t key = (static_cast<std::uint64_t>(i) << 32);
    return h_lower_ + (h_upper_ - h_lower_) * rng::uniform01(seed_, key);
}

double ChannelScenario::relay_gain(int i, int j) const {
    if (i < 1 || i > n_ || j < 1 || j > n_ || i == j) {
        throw std::invalid_argument("relay_gain: node indices out of range");
    }
    if (explicit_relay_) return (*explicit_relay_)(i - 1, j - 1);
    if (!random_) return h_upper_;
    const std::uint64_t key = (static_cast<std::uint64_t>(i) << 32) | static_cast<std::uint64_t>(j);
    return h_lower_ + (h_upper_ - h_lower_) * rng::uniform01(seed_, key);
}

void ChannelScenario::write_csv(std::ostream& out) const {
    out << "i,j,h\n";
    char buf[64];
    for (int i = 1; i <= n_; ++i) {
        std::snprintf(buf, sizeof buf, "%d,0,%.17g\n", i, collector_gain(i));
        out << buf;
        for (int j = 1; j <= n_; ++j) {
            if (j == i) continue;
            std::snprintf(buf, sizeof buf, "%d,%d,%.17g\n", i, j, relay_gain(i, j));
            out << buf;
        }
    }
}

CapacityBound c_upper(const ChannelScenario& scenario) {
    const double p = scenario.total_power();
    const double n = static_cast<double>(scenario.n());
    double sum = 0.0;
    for (int i = 1; i <= scenario.n(); ++i) {
        const double h = scenario.collector_gain(i);
        sum += h * h;
    }
    CapacityBound cb;
    cb.value = 0.5 * std::log1p(sum * p);
    cb.lower = 0.5 * std::log1p(scenario.h_lower() * scenario.h_lower() * n * p);
    cb.upper = 0.5 * std::log1p(scenario.h_upper() * scenario.h_upper() * n * p);
    if (cb.value < cb.lower - 1e-12 || cb.value > cb.upper + 1e-12) {
        throw std::runtime_error("c_upper: capacity escaped the gain-bound bracket");
    }
    return cb;
}

double AfDesign::beta(const ChannelScenario& scenario, int i, int j) const {
    if (beta_matrix.size() > 0) return beta_matrix(i - 1, j - 1);
    return zeta * scenario.relay_gain(i, j) * scenario.collector_gain(j);
}

AfDesign af_design(const ChannelScenario& scenario) {
    const int n = scenario.n();
    if (n < 2) throw std::invalid_argument("af_design: N >= 2 required");
    const double p = scenario.total_power();
    const double hu = scenario.h_upper();
    AfDesign design;
    design.zeta = std::sqrt(p / (std::pow(hu, 6) * n * p + std::pow(hu, 4) * n));

    const bool dense = n <= 2000;
    if (dense) design.beta_matrix = linalg::Matrix::Zero(n, n);
    double min_margin = std::numeric_limits<double>::infinity();
    if (dense) {
        for (int i = 1; i <= n; ++i) {
            for (int j = 1; j <= n; ++j) {
                if (j == i) continue;
                const double h_ij = scenario.relay_gain(i, j);
                const double b = design.zeta * h_ij * scenario.collector_gain(j);
                design.beta_matrix(i - 1, j - 1) = b;
                min_margin = std::min(min_margin, p / n - b * b * (h_ij * h_ij * p + 1.0));
            }
        }
    } else {
        // worst case over the gain box; the pairwise margin can only be larger
        const double b = design.zeta * hu * hu;
        min_margin = p / n - b * b * (hu * hu * p + 1.0);
    }
    design.min_margin = min_margin;
    design.feasible = min_margin >= -1e-12 * p / n;
    if (!design.feasible) {
        throw std::runtime_error("af_design: per-node power audit failed (internal invariant)");
    }
    return design;
}

AfRate af_rate(const ChannelScenario& scenario, const AfDesign& design, int node) {
    const int n = scenario.n();
    if (node < 1 || node > n) throw std::invalid_argument("af_rate: node out of range");
    const double p = scenario.total_power();
    double signal_coeff = 0.0;
    double noise_var = 1.0; // collector noise
    for (int j = 1; j <= n; ++j) {
        if (j == node) continue;
        const double b = design.beta(scenario, node, j);
        const double h_j0 = scenario.collector_gain(j);
        signal_coeff += b * scenario.relay_gain(node, j) * h_j0;
        noise_var += b * h_j0 * b * h_j0;
    }
    AfRate rate;
    rate.sinr = signal_coeff * signal_coeff * p / noise_var;
    rate.exact = 0.25 * std::log1p(rate.sinr);
    const double hl = scenario.h_lower();
    const double hu = scenario.h_upper();
    const double nn = static_cast<double>(n);
    rate.lower_bound = 0.25 * std::log1p(std::pow(hl, 8) * p * p * (nn - 1.0) * (nn - 1.0) / nn /
                                         (2.0 * std::pow(hu, 6) * p + std::pow(hu, 4)));
    // gains are within [h_lower, h_upper] by construction for all modes
    if (rate.exact < rate.lower_bound - 1e-12) {
        throw std::runtime_error("af_rate: exact rate fell below the closed-form lower bound");
    }
    return rate;
}

double CaScaling::operator()(double n) const {
    return kappa * nu * std::log(n * schedule(n));
}

CaScaling c_a_scaling(const PowerSchedule& schedule, double epsilon, double kappa) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("c_a_scaling: epsilon > 0 required");
    if (!(kappa > 0.0) || !(kappa < 1.0)) throw std::invalid_argument("c_a_scaling: kappa in (0,1) required");
    double eps_eff = epsilon;
    switch (schedule.family) {
        case PowerFamily::constant:
        case PowerFamily::linear:
        case PowerFamily::near_exponential:
            break;
        case PowerFamily::power_law:
            if (schedule.omega >= 0.5) {
                throw RegimeError("c_a_scaling: " + schedule.describe() +
                                  " fails the growth condition; sum rate approaches a positive constant or zero");
            }
            eps_eff = std::min(eps_eff, 0.5 - schedule.omega);
            break;
    }
    CaScaling ca;
    ca.nu = std::min(eps_eff / (1.0 + 2.0 * eps_eff), 0.25);
    ca.epsilon = eps_eff;
    ca.kappa = kappa;
    ca.schedule = schedule;
    return ca;
}

} // namespace densor
