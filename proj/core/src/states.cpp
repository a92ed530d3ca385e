#include "evqc/states.hpp"

#include <cmath>
#include <numbers>

#include "evqc/error.hpp"

namespace evqc {

namespace {

constexpr double kTraceTol = 1e-10;

Matrix identity_over_n(std::size_t dim) {
    const auto d = static_cast<Eigen::Index>(dim);
    return Matrix::Identity(d, d) / static_cast<double>(dim);
}

// N^-1 1 - (theta/N) sum_i omega_i I^i_axis
DensityMatrix polarized(const SpinSystem &sys, Axis axis) {
    const unsigned n = sys.n();
    const std::size_t dim = std::size_t{1} << n;
    Matrix m = identity_over_n(dim);
    const double scale = sys.theta() / static_cast<double>(dim);
    for (unsigned i = 1; i <= n; ++i) {
        // I^i_{x,z} entries are +-1/2 on the bit belonging to spin i.
        const double weight = 0.5 * scale * sys.omega()[i - 1];
        const std::size_t mask = std::size_t{1} << (n - i);
        for (std::size_t l = 0; l < dim; ++l) {
            const auto row = static_cast<Eigen::Index>(l);
            if (axis == Axis::Z) {
                m(row, row) -= (l & mask) == 0 ? weight : -weight;
            } else {
                m(row, static_cast<Eigen::Index>(l ^ mask)) -= weight;
            }
        }
    }
    return DensityMatrix(Operator(std::move(m)));
}

} // namespace

SpinSystem::SpinSystem(std::vector<double> omega, double theta, std::vector<Coupling> couplings)
    : omega_(std::move(omega)), theta_(theta), couplings_(std::move(couplings)) {
    if (omega_.empty() || omega_.size() > kMaxDenseSpins) {
        throw Infeasible("spin system needs 1.." + std::to_string(kMaxDenseSpins) + " spins");
    }
    for (double w : omega_) {
        if (!(w > 0.0) || !std::isfinite(w)) {
            throw Error("every omega_i must be positive and finite");
        }
    }
    if (!(theta_ > 0.0) || !std::isfinite(theta_)) {
        throw Error("theta must be positive and finite");
    }
    for (const auto &c : couplings_) {
        if (c.i < 1 || c.j <= c.i || c.j > n()) {
            throw IndexOutOfRange("coupling indices must satisfy 1 <= i < j <= n");
        }
        if (!std::isfinite(c.J)) {
            throw Error("coupling constant must be finite");
        }
    }
}

bool SpinSystem::outside_high_temperature_regime() const noexcept {
    for (double w : omega_) {
        if (theta_ * w > 0.1) return true;
    }
    return false;
}

SpinSystem default_spin_system(unsigned n) {
    if (n == 0 || n > kMaxDenseSpins) {
        throw Infeasible("spin count out of range");
    }
    std::vector<double> omega(n);
    for (unsigned i = 0; i < n; ++i) {
        const double frac = n == 1 ? 0.5 : static_cast<double>(i) / (n - 1);
        omega[i] = 2.0 * std::numbers::pi * (400.0 + 200.0 * frac);
    }
    return SpinSystem(std::move(omega), 2e-8);
}

DensityMatrix::DensityMatrix(Operator op) : op_(std::move(op)) {
    if (!op_.is_hermitian()) {
        throw NotHermitian("density matrix must be hermitian");
    }
    if (std::abs(op_.trace() - Complex(1.0, 0.0)) > kTraceTol) {
        throw Error("density matrix must have unit trace");
    }
}

bool DensityMatrix::is_positive_semidefinite(double tol) const {
    return eig_multiset(op_).min() >= -tol;
}

DensityMatrix thermal_state(const SpinSystem &sys) {
    return polarized(sys, Axis::Z);
}

DensityMatrix pulsed_thermal(const SpinSystem &sys) {
    return polarized(sys, Axis::X);
}

DensityMatrix pseudopure(unsigned n, double alpha) {
    const auto w = w_projector(n);
    const auto dim = static_cast<double>(w.dim());
    Matrix m = (1.0 - alpha / dim) * identity_over_n(w.dim()) + (alpha / dim) * w.matrix();
    return DensityMatrix(Operator(std::move(m)));
}

DensityMatrix pure_w(unsigned n) {
    return DensityMatrix(w_projector(n));
}

} // namespace evqc
