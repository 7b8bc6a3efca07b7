// SPDX-License-Identifier: Apache-2.0
#include "densor/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "densor/errors.hpp"

namespace densor {

namespace {

std::string trim(std::string s) {
    const auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

bool parse_double(const std::string& s, double& out) {
    try {
        std::size_t used = 0;
        out = std::stod(s, &used);
        return used == s.size();
    } catch (...) {
        return false;
    }
}

bool parse_u64(const std::string& s, std::uint64_t& out) {
    try {
        std::size_t used = 0;
        out = std::stoull(s, &used);
        return used == s.size();
    } catch (...) {
        return false;
    }
}

bool parse_bool(const std::string& s, bool& out) {
    if (s == "true") { out = true; return true; }
    if (s == "false") { out = false; return true; }
    return false;
}

struct Assign {
    Scenario& sc;
    std::vector<std::string>& diags;
    std::string where; // "file:line" or override context

    void fail(const std::string& msg) { diags.push_back(where + ": " + msg); }

    void number(const std::string& key, const std::string& value, double& field) {
        if (!parse_double(value, field)) fail("field `" + key + "`: expected a number, got `" + value + "`");
    }
    void integer(const std::string& key, const std::string& value, int& field) {
        double v = 0;
        if (!parse_double(value, v) || v != std::floor(v)) {
            fail("field `" + key + "`: expected an integer, got `" + value + "`");
            return;
        }
        field = static_cast<int>(v);
    }
    void count(const std::string& key, const std::string& value, std::size_t& field) {
        double v = 0;
        if (!parse_double(value, v) || v != std::floor(v) || v < 0) {
            fail("field `" + key + "`: expected a nonnegative integer, got `" + value + "`");
            return;
        }
        field = static_cast<std::size_t>(v);
    }
    void seed(const std::string& key, const std::string& value, std::uint64_t& field) {
        if (!parse_u64(value, field)) fail("field `" + key + "`: expected an unsigned integer, got `" + value + "`");
    }
    void boolean(const std::string& key, const std::string& value, bool& field) {
        if (!parse_bool(value, field)) fail("field `" + key + "`: expected true or false, got `" + value + "`");
    }

    bool apply(const std::string& block, const std::string& key, const std::string& value) {
        if (block == "process") {
            if (key == "kind") sc.process.kind = value;
            else if (key == "sigma2") number(key, value, sc.process.sigma2);
            else if (key == "eta") number(key, value, sc.process.eta);
            else if (key == "T0") number(key, value, sc.process.t0);
            else if (key == "kernel_csv") sc.process.kernel_csv = value;
            else return false;
            return true;
        }
        if (block == "power") {
            if (key == "family") sc.power.family = value;
            else if (key == "P_tot") number(key, value, sc.power.p_tot);
            else if (key == "P_ind") number(key, value, sc.power.p_ind);
            else if (key == "omega") number(key, value, sc.power.omega);
            else if (key == "c") number(key, value, sc.power.c);
            else if (key == "epsilon") number(key, value, sc.power.epsilon);
            else return false;
            return true;
        }
        if (block == "gains") {
            if (key == "mode") sc.gains.mode = value;
            else if (key == "h_lower") number(key, value, sc.gains.h_lower);
            else if (key == "h_upper") number(key, value, sc.gains.h_upper);
            else if (key == "seed") seed(key, value, sc.gains.seed);
            else return false;
            return true;
        }
        if (block == "sweep") {
            if (key == "N") {
                sc.sweep_n.clear();
                std::stringstream ss(value);
                std::string item;
                while (std::getline(ss, item, ',')) {
                    item = trim(item);
                    double v = 0;
                    if (!parse_double(item, v) || v != std::floor(v) || v < 0) {
                        fail("field `N`: expected a comma-separated integer list, got `" + item + "`");
                        return true;
                    }
                    sc.sweep_n.push_back(static_cast<long long>(v));
                }
            } else {
                return false;
            }
            return true;
        }
        if (block == "mc") {
            if (key == "enabled") boolean(key, value, sc.mc.enabled);
            else if (key == "trials") count(key, value, sc.mc.trials);
            else if (key == "sigma_D2") {
                if (value == "auto") {
                    sc.mc.sigma_d2.reset();
                } else {
                    double v = 0;
                    if (!parse_double(value, v)) fail("field `sigma_D2`: expected a number or `auto`");
                    else sc.mc.sigma_d2 = v;
                }
            } else if (key == "seed") seed(key, value, sc.mc.seed);
            else if (key == "max_N") integer(key, value, sc.mc.max_n);
            else if (key == "quad_per_gap") integer(key, value, sc.mc.quad_per_gap);
            else return false;
            return true;
        }
        if (block == "numerics") {
            if (key == "kappa") number(key, value, sc.numerics.kappa);
            else if (key == "K_max") count(key, value, sc.numerics.k_max);
            else if (key == "quad_panels") integer(key, value, sc.numerics.quad_panels);
            else if (key == "exact_max_N") integer(key, value, sc.numerics.exact_max_n);
            else return false;
            return true;
        }
        return false;
    }
};

const char* kBlockNames[] = {"process", "power", "gains", "sweep", "mc", "numerics"};

bool known_block(const std::string& name) {
    return std::find(std::begin(kBlockNames), std::end(kBlockNames), name) != std::end(kBlockNames);
}

} // namespace

ScenarioLoad load_scenario(std::istream& in, const std::string& name) {
    ScenarioLoad out;
    std::string line;
    std::string block;
    std::size_t lineno = 0;
    Assign assign{out.scenario, out.diagnostics, ""};

    while (std::getline(in, line)) {
        ++lineno;
        assign.where = name + ":" + std::to_string(lineno);
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line == "}") {
            if (block.empty()) assign.fail("unmatched `}`");
            block.clear();
            continue;
        }
        if (line.back() == '{') {
            const std::string opened = trim(line.substr(0, line.size() - 1));
            if (!block.empty()) {
                assign.fail("nested block `" + opened + "` inside `" + block + "`");
                continue;
            }
            if (!known_block(opened)) {
                assign.fail("unknown block `" + opened + "`");
                block = opened; // keep consuming its keys silently
                continue;
            }
            block = opened;
            if (opened == "process") out.scenario.has_process = true;
            if (opened == "power") out.scenario.has_power = true;
            if (opened == "gains") out.scenario.has_gains = true;
            if (opened == "sweep") out.scenario.has_sweep = true;
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            assign.fail("expected `key = value`, got `" + line + "`");
            continue;
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (block.empty()) {
            assign.fail("key `" + key + "` outside any block");
            continue;
        }
        if (!known_block(block)) continue; // already diagnosed the block itself
        if (!assign.apply(block, key, value)) {
            assign.fail("unknown key `" + key + "` in block `" + block + "`");
        }
    }
    if (!block.empty()) {
        out.diagnostics.push_back(name + ": block `" + block + "` not closed");
    }

    const auto schema = validate_scenario(out.scenario);
    out.diagnostics.insert(out.diagnostics.end(), schema.begin(), schema.end());
    return out;
}

ScenarioLoad load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open scenario file: " + path);
    return load_scenario(in, path);
}

void apply_override(Scenario& scenario, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) {
        throw ConfigError("override must be block.key=value, got `" + assignment + "`");
    }
    const std::string path = trim(assignment.substr(0, eq));
    const std::string value = trim(assignment.substr(eq + 1));
    const auto dot = path.find('.');
    if (dot == std::string::npos) {
        throw ConfigError("override key must be block.key, got `" + path + "`");
    }
    const std::string block = path.substr(0, dot);
    const std::string key = path.substr(dot + 1);
    std::vector<std::string> diags;
    Assign assign{scenario, diags, "--set " + assignment};
    if (!known_block(block) || !assign.apply(block, key, value)) {
        throw ConfigError("unknown override key `" + path + "`");
    }
    if (!diags.empty()) throw ConfigError(diags.front());
}

std::vector<std::string> validate_scenario(const Scenario& sc) {
    std::vector<std::string> d;
    const auto need = [&](bool ok, const std::string& msg) {
        if (!ok) d.push_back(msg);
    };
    need(sc.has_process, "missing block `process`");
    need(sc.has_power, "missing block `power`");
    need(sc.has_gains, "missing block `gains`");
    need(sc.has_sweep, "missing block `sweep`");

    if (sc.has_process) {
        if (sc.process.kind == "gauss-markov") {
            need(sc.process.sigma2 > 0, "process.sigma2 must be > 0");
            need(sc.process.eta > 0, "process.eta must be > 0");
            need(sc.process.t0 > 0, "process.T0 must be > 0");
        } else if (sc.process.kind == "tabulated") {
            if (sc.process.kernel_csv.empty()) {
                d.push_back("process.kernel_csv required for tabulated kernels");
            } else if (!std::filesystem::exists(sc.process.kernel_csv)) {
                d.push_back("process.kernel_csv: file does not exist: " + sc.process.kernel_csv);
            }
            d.push_back("process.kind = tabulated: sweeps need the class-A constants, which are only "
                        "derived for gauss-markov kernels; use the library API for tabulated kernels");
        } else {
            d.push_back("process.kind must be gauss-markov or tabulated, got `" + sc.process.kind + "`");
        }
    }
    if (sc.has_power) {
        const std::string& f = sc.power.family;
        if (f == "constant") need(sc.power.p_tot > 0, "power.P_tot must be > 0");
        else if (f == "linear") need(sc.power.p_ind > 0, "power.P_ind must be > 0");
        else if (f == "power-law") need(sc.power.omega > 0, "power.omega must be > 0");
        else if (f == "near-exponential") need(sc.power.c > 0, "power.c must be > 0");
        else d.push_back("power.family must be constant, linear, power-law or near-exponential");
        need(sc.power.epsilon > 0, "power.epsilon must be > 0");
    }
    if (sc.has_gains) {
        if (sc.gains.mode == "constant") {
            need(sc.gains.h_lower == sc.gains.h_upper,
                 "gains.mode = constant requires h_lower == h_upper");
        } else if (sc.gains.mode != "random") {
            d.push_back("gains.mode must be constant or random");
        }
        need(sc.gains.h_lower > 0 && sc.gains.h_lower <= sc.gains.h_upper && sc.gains.h_upper <= 1.0,
             "gains must satisfy 0 < h_lower <= h_upper <= 1");
    }
    if (sc.has_sweep) {
        need(!sc.sweep_n.empty(), "sweep.N must list at least one sensor count");
        for (long long n : sc.sweep_n) need(n >= 2, "sweep.N entries must be >= 2");
    }
    need(sc.mc.trials >= 100, "mc.trials must be >= 100");
    if (sc.mc.sigma_d2.has_value()) need(*sc.mc.sigma_d2 > 0, "mc.sigma_D2 must be > 0 or `auto`");
    need(sc.mc.max_n >= 2, "mc.max_N must be >= 2");
    need(sc.mc.quad_per_gap >= 1, "mc.quad_per_gap must be >= 1");
    need(sc.numerics.kappa > 0 && sc.numerics.kappa < 1, "numerics.kappa must be in (0,1)");
    need(sc.numerics.k_max >= 100, "numerics.K_max must be >= 100");
    need(sc.numerics.quad_panels >= 1, "numerics.quad_panels must be >= 1");
    need(sc.numerics.exact_max_n >= 2, "numerics.exact_max_N must be >= 2");
    return d;
}

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

} // namespace

std::string serialize_scenario(const Scenario& sc) {
    std::ostringstream out;
    out << "process {\n";
    out << "  kind = " << sc.process.kind << "\n";
    if (sc.process.kind == "tabulated") {
        out << "  kernel_csv = " << sc.process.kernel_csv << "\n";
    } else {
        out << "  sigma2 = " << fmt(sc.process.sigma2) << "\n";
        out << "  eta = " << fmt(sc.process.eta) << "\n";
        out << "  T0 = " << fmt(sc.process.t0) << "\n";
    }
    out << "}\n";
    out << "power {\n";
    out << "  family = " << sc.power.family << "\n";
    if (sc.power.family == "constant") out << "  P_tot = " << fmt(sc.power.p_tot) << "\n";
    if (sc.power.family == "linear") out << "  P_ind = " << fmt(sc.power.p_ind) << "\n";
    if (sc.power.family == "power-law") out << "  omega = " << fmt(sc.power.omega) << "\n";
    if (sc.power.family == "near-exponential") out << "  c = " << fmt(sc.power.c) << "\n";
    out << "  epsilon = " << fmt(sc.power.epsilon) << "\n";
    out << "}\n";
    out << "gains {\n";
    out << "  mode = " << sc.gains.mode << "\n";
    out << "  h_lower = " << fmt(sc.gains.h_lower) << "\n";
    out << "  h_upper = " << fmt(sc.gains.h_upper) << "\n";
    out << "  seed = " << sc.gains.seed << "\n";
    out << "}\n";
    out << "sweep {\n  N = ";
    for (std::size_t i = 0; i < sc.sweep_n.size(); ++i) {
        if (i) out << ", ";
        out << sc.sweep_n[i];
    }
    out << "\n}\n";
    out << "mc {\n";
    out << "  enabled = " << (sc.mc.enabled ? "true" : "false") << "\n";
    out << "  trials = " << sc.mc.trials << "\n";
    out << "  sigma_D2 = " << (sc.mc.sigma_d2 ? fmt(*sc.mc.sigma_d2) : std::string("auto")) << "\n";
    out << "  seed = " << sc.mc.seed << "\n";
    out << "  max_N = " << sc.mc.max_n << "\n";
    out << "  quad_per_gap = " << sc.mc.quad_per_gap << "\n";
    out << "}\n";
    out << "numerics {\n";
    out << "  kappa = " << fmt(sc.numerics.kappa) << "\n";
    out << "  K_max = " << sc.numerics.k_max << "\n";
    out << "  quad_panels = " << sc.numerics.quad_panels << "\n";
    out << "  exact_max_N = " << sc.numerics.exact_max_n << "\n";
    out << "}\n";
    return out.str();
}

namespace {

PowerSchedule schedule_of(const Scenario& sc) {
    const std::string& f = sc.power.family;
    if (f == "constant") return PowerSchedule::constant(sc.power.p_tot);
    if (f == "linear") return PowerSchedule::linear(sc.power.p_ind);
    if (f == "power-law") return PowerSchedule::power_law(sc.power.omega);
    return PowerSchedule::near_exponential(sc.power.c);
}

std::string regression_note(const std::vector<BoundRow>& rows) {
    // slope of log D_l against log log (N P(N)) across distinct medium rows
    std::vector<double> xs, ys;
    for (const auto& r : rows) {
        const double np = r.n * r.p;
        if (r.regime != PowerRegime::very_small && np > std::exp(1.0) && r.d_l > 0) {
            xs.push_back(std::log(std::log(np)));
            ys.push_back(std::log(r.d_l));
        }
    }
    if (xs.size() < 3) return "scaling fit: insufficient rows (need >= 3 with log(NP) > 1)";
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double n = static_cast<double>(xs.size());
    const double denom = n * sxx - sx * sx;
    if (std::abs(denom) < 1e-12) return "scaling fit: N values too close for a slope";
    const double slope = (n * sxy - sx * sy) / denom;
    return "scaling fit: slope(log D_l vs log log NP) = " + fmt(slope) + " (theory: 1-x)";
}

} // namespace

RunArtifacts run_scenario(const Scenario& scenario, const std::filesystem::path& out_dir) {
    {
        const auto diags = validate_scenario(scenario);
        if (!diags.empty()) {
            std::string msg = "scenario invalid:";
            for (const auto& s : diags) msg += "\n  " + s;
            throw ConfigError(msg);
        }
    }
    std::filesystem::create_directories(out_dir);

    const KernelModel model =
        KernelModel::gauss_markov(scenario.process.sigma2, scenario.process.eta, scenario.process.t0);
    ClassAParams params =
        gm_class_a_params(scenario.process.sigma2, scenario.process.eta, scenario.process.t0);
    const LipschitzAudit audit = lipschitz_audit(model, 10000);
    params.lipschitz_b = audit.b_hat;

    const PowerSchedule power = schedule_of(scenario);
    GainsSpec gains;
    gains.random = scenario.gains.mode == "random";
    gains.h_lower = scenario.gains.h_lower;
    gains.h_upper = scenario.gains.h_upper;
    gains.seed = scenario.gains.seed;

    BoundOptions options;
    options.kappa = scenario.numerics.kappa;
    options.epsilon = scenario.power.epsilon;
    options.k_max = scenario.numerics.k_max;
    options.quad_panels = scenario.numerics.quad_panels;
    options.exact_max_n = scenario.numerics.exact_max_n;

    McOptions mc;
    mc.enabled = scenario.mc.enabled;
    mc.trials = scenario.mc.trials;
    mc.sigma_d2 = scenario.mc.sigma_d2;
    mc.seed = scenario.mc.seed;
    mc.max_n = scenario.mc.max_n;
    mc.quad_per_gap = scenario.mc.quad_per_gap;

    RunArtifacts artifacts;
    artifacts.rows = sweep(model, params, power, gains, scenario.sweep_n, options, mc);

    artifacts.csv = out_dir / "sweep.csv";
    {
        std::ofstream out(artifacts.csv, std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + artifacts.csv.string());
        write_csv(out, artifacts.rows);
    }

    artifacts.resolved = out_dir / "scenario.resolved";
    {
        std::ofstream out(artifacts.resolved, std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + artifacts.resolved.string());
        out << serialize_scenario(scenario);
    }

    artifacts.report = out_dir / "report.txt";
    {
        std::ofstream out(artifacts.report, std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + artifacts.report.string());
        const PowerRegime regime = classify_power_regime(power, params, scenario.power.epsilon);
        out << "densor sweep report\n";
        out << "===================\n";
        out << "process: gauss-markov sigma2=" << fmt(scenario.process.sigma2)
            << " eta=" << fmt(scenario.process.eta) << " T0=" << fmt(scenario.process.t0) << "\n";
        out << "class-A: x=" << fmt(params.x) << " d=" << fmt(params.d) << " K0=" << params.k0
            << " alpha=" << fmt(params.alpha) << " beta=" << fmt(params.beta)
            << " gamma=" << fmt(params.gamma) << " tau=" << fmt(params.tau) << "\n";
        out << "lipschitz audit: alpha_hat=" << fmt(audit.alpha_hat) << " B_hat=" << fmt(audit.b_hat)
            << "\n";
        out << "power: " << power.describe() << " -> regime: " << to_string(regime) << "\n";
        if (regime == PowerRegime::medium) {
            const CaScaling ca = c_a_scaling(power, scenario.power.epsilon, scenario.numerics.kappa);
            out << "nu=" << fmt(ca.nu) << " kappa=" << fmt(ca.kappa)
                << " pi(x,nu)=" << fmt(constant_ratio(params.x, ca.nu)) << "\n";
            out << "constants at kappa: lower " << fmt(dl_scaling_const(params, ca.kappa))
                << ", upper " << fmt(du_upper_const(params, ca.kappa, ca.nu)) << "\n";
            out << "constants at kappa->1: lower " << fmt(dl_scaling_const(params, 1.0)) << ", upper "
                << fmt(du_upper_const(params, 1.0 - 1e-12, ca.nu)) << "\n";
        }
        out << regression_note(artifacts.rows) << "\n";

        std::size_t ordered = 0, comparable = 0, in_window = 0, with_theta = 0;
        for (const auto& r : artifacts.rows) {
            if (r.d_u.has_value() && r.mode != "const") {
                ++comparable;
                if (r.d_l <= *r.d_u + r.d_u_err + 1e-12) ++ordered;
            }
            if (r.theta_prime.has_value()) {
                ++with_theta;
                if (r.theta_in_window) ++in_window;
            }
        }
        out << "bound ordering D_l <= D_u: " << ordered << "/" << comparable << " rows\n";
        out << "theta' inside window: " << in_window << "/" << with_theta << " rows\n";
        out << "rows: " << artifacts.rows.size() << " (see sweep.csv)\n";
    }
    return artifacts;
}

} // namespace densor
