#pragma once

#include <vector>

#include "evqc/spinops.hpp"

namespace evqc {

/// Weak scalar coupling between spins i < j (1-based), in radians per unit time.
struct Coupling {
    unsigned i = 0;
    unsigned j = 0;
    double J = 0.0;
};

/// An n-spin molecule: Larmor angular frequencies omega_i and the thermal
/// time scale theta = hbar / (k_B T). Only the products theta * omega_i enter
/// any state.
class SpinSystem {
public:
    SpinSystem(std::vector<double> omega, double theta, std::vector<Coupling> couplings = {});

    unsigned n() const noexcept { return static_cast<unsigned>(omega_.size()); }
    const std::vector<double> &omega() const noexcept { return omega_; }
    double theta() const noexcept { return theta_; }
    const std::vector<Coupling> &couplings() const noexcept { return couplings_; }

    /// True when some theta * omega_i exceeds 0.1 and the two-term thermal
    /// expansion stops being a good approximation.
    bool outside_high_temperature_regime() const noexcept;

private:
    std::vector<double> omega_;
    double theta_;
    std::vector<Coupling> couplings_;
};

/// Demo system: omega_i spread evenly over [2pi*400, 2pi*600], theta = 2e-8,
/// so theta * omega_i sits between 5e-5 and 7.6e-5.
SpinSystem default_spin_system(unsigned n);

/// Trace-one hermitian operator.
class DensityMatrix {
public:
    explicit DensityMatrix(Operator op);

    const Operator &op() const noexcept { return op_; }
    const Matrix &matrix() const noexcept { return op_.matrix(); }
    std::size_t dim() const noexcept { return op_.dim(); }

    /// Smallest eigenvalue >= -tol. Not a constructor invariant: the
    /// truncated thermal expansion can dip below zero for large theta*omega.
    bool is_positive_semidefinite(double tol = 1e-12) const;

private:
    Operator op_;
};

/// N^-1 1 - (theta/N) sum_i omega_i I^i_z. Couplings do not enter.
DensityMatrix thermal_state(const SpinSystem &sys);

/// (1 - alpha/N) N^-1 1 + (alpha/N) |w><w|.
DensityMatrix pseudopure(unsigned n, double alpha);

/// Thermal state after an ideal hard 90-degree y pulse:
/// N^-1 1 - (theta/N) sum_i omega_i I^i_x.
DensityMatrix pulsed_thermal(const SpinSystem &sys);

/// |w><w|.
DensityMatrix pure_w(unsigned n);

} // namespace evqc
