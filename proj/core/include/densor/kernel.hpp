// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace densor {

enum class KernelKind { gauss_markov, tabulated };

/// Autocorrelation kernel K(t,s) of a zero-mean Gaussian process on [0,T0].
///
/// Two flavors: the Gauss-Markov (Ornstein-Uhlenbeck) kernel
/// K(t,s) = (sigma^2 / 2 eta) exp(-eta |t-s|), and user-tabulated kernels
/// interpolated bilinearly from a complete grid. Immutable after
/// construction; safe to share across threads.
class KernelModel {
public:
    static KernelModel gauss_markov(double sigma2, double eta, double t0);

    /// Tabulated kernel on the grid `axis` x `axis`; `values` is row-major
    /// with values[i*m+j] = K(axis[i], axis[j]). Symmetrized by averaging
    /// K(t,s) and K(s,t) at load time.
    static KernelModel tabulated(std::vector<double> axis, std::vector<double> values);

    /// Loads a tabulated kernel from CSV with header `t,s,K`.
    static KernelModel from_csv(const std::string& path);
    static KernelModel from_csv_stream(std::istream& in, const std::string& name = "<stream>");

    KernelKind kind() const noexcept { return kind_; }
    double sigma2() const noexcept { return sigma2_; }
    double eta() const noexcept { return eta_; }
    double t0() const noexcept { return t0_; }

    /// K(t,s); domain error outside [0,T0]^2.
    double operator()(double t, double s) const;

private:
    KernelModel() = default;

    KernelKind kind_ = KernelKind::gauss_markov;
    double sigma2_ = 1.0;
    double eta_ = 1.0;
    double t0_ = 1.0;
    // tabulated storage
    std::vector<double> axis_;
    std::vector<double> table_; // row-major, symmetric
};

/// K(t,s). Same contract as KernelModel::operator().
double kernel_eval(const KernelModel& model, double t, double s);

/// (1/T0) Int_0^T0 K(t,t) dt, by composite midpoint quadrature.
/// This is the distortion at zero rate (everything discarded).
double mean_energy(const KernelModel& model);

/// Empirical Lipschitz audit of K over [0,T0]^2.
struct LipschitzAudit {
    double alpha_hat = 0.0; ///< fitted Lipschitz order
    double b_hat = 0.0;     ///< max |dK| / dist^alpha_hat over the fit set
    bool degenerate = false; ///< dK identically zero on the tested grid
    bool below_half = false; ///< alpha_hat <= 1/2: kernel outside the supported class
};

/// Fits log max|dK| against log(distance) on the smallest 10% of grid
/// separations. grid_points >= 100.
LipschitzAudit lipschitz_audit(const KernelModel& model, std::size_t grid_points);

} // namespace densor
