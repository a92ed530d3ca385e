#pragma once

#include <cstddef>
#include <vector>

#include "evqc/spinops.hpp"
#include "evqc/states.hpp"

namespace evqc {

/// Zeeman plus weak (I_z I_z) coupling Hamiltonian in angular-frequency
/// units (hbar = 1). Diagonal by construction.
class Hamiltonian {
public:
    explicit Hamiltonian(const SpinSystem &sys);

    const Operator &op() const noexcept { return op_; }
    const SpinSystem &source() const noexcept { return source_; }

private:
    SpinSystem source_;
    Operator op_;
};

/// H = sum_i omega_i I^i_z + sum_{i<j} 2 pi J_ij I^i_z I^j_z.
Hamiltonian hamiltonian(const SpinSystem &sys);

/// e^{iHt} M e^{-iHt} through elementwise phases e^{i(H_jj - H_kk)t}.
Operator heisenberg_op(const Operator &m, const Hamiltonian &h, double t);

/// Same conjugation for an arbitrary hermitian H via its eigendecomposition.
/// Slow; kept for cross-checking the diagonal path.
Operator heisenberg_op_dense(const Operator &m, const Operator &h, double t);

struct SignalTrace {
    double t_start = 0.0;
    double dt = 0.0;
    std::vector<Complex> samples;

    std::vector<double> real() const;
};

/// samples[k] = Tr(rho M_k), M_k = heisenberg_op(M, H, k dt). Undamped.
SignalTrace signal(const DensityMatrix &rho, const Hamiltonian &h, const Operator &m, double dt,
                   std::size_t count);

struct SpectrumPoint {
    double omega = 0.0;     // radians per unit time
    double magnitude = 0.0; // |DFT| / sqrt(K)
};

/// Unitary-normalized DFT of the samples on an ascending angular-frequency
/// axis covering [-pi/dt, pi/dt).
std::vector<SpectrumPoint> spectrum(const SignalTrace &trace);

inline constexpr double kDefaultPeakThreshold = 0.05;

/// Local maxima above rel_threshold times the largest magnitude.
std::vector<SpectrumPoint> find_peaks(const std::vector<SpectrumPoint> &spec,
                                      double rel_threshold = kDefaultPeakThreshold);

} // namespace evqc
