#include "evqc/timedomain.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <unsupported/Eigen/FFT>

#include "evqc/error.hpp"

namespace evqc {

namespace {

Operator build_hamiltonian(const SpinSystem &sys) {
    const unsigned n = sys.n();
    const std::size_t dim = std::size_t{1} << n;
    Eigen::VectorXcd diag = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim));
    auto z = [n](std::size_t l, unsigned spin) {
        return (l >> (n - spin)) & 1U ? -0.5 : 0.5;
    };
    for (std::size_t l = 0; l < dim; ++l) {
        double e = 0.0;
        for (unsigned i = 1; i <= n; ++i) e += sys.omega()[i - 1] * z(l, i);
        for (const auto &c : sys.couplings()) {
            e += 2.0 * std::numbers::pi * c.J * z(l, c.i) * z(l, c.j);
        }
        diag(static_cast<Eigen::Index>(l)) = e;
    }
    return Operator::diagonal(diag);
}

} // namespace

Hamiltonian::Hamiltonian(const SpinSystem &sys) : source_(sys), op_(build_hamiltonian(sys)) {}

Hamiltonian hamiltonian(const SpinSystem &sys) {
    return Hamiltonian(sys);
}

Operator heisenberg_op(const Operator &m, const Hamiltonian &h, double t) {
    if (m.dim() != h.op().dim()) {
        throw DimensionMismatch("heisenberg_op: operator and Hamiltonian dimensions differ");
    }
    const Eigen::VectorXcd phase =
        (Complex(0.0, t) * h.op().matrix().diagonal()).array().exp().matrix();
    return Operator(phase.asDiagonal() * m.matrix() * phase.conjugate().asDiagonal());
}

Operator heisenberg_op_dense(const Operator &m, const Operator &h, double t) {
    if (m.dim() != h.dim()) {
        throw DimensionMismatch("heisenberg_op_dense: operator and Hamiltonian dimensions differ");
    }
    if (!h.is_hermitian()) {
        throw NotHermitian("Hamiltonian must be hermitian");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h.matrix());
    const Eigen::VectorXcd phases =
        (Complex(0.0, t) * solver.eigenvalues().cast<Complex>()).array().exp().matrix();
    const Matrix u = solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
    return Operator(u * m.matrix() * u.adjoint());
}

std::vector<double> SignalTrace::real() const {
    std::vector<double> out(samples.size());
    std::transform(samples.begin(), samples.end(), out.begin(), [](Complex c) { return c.real(); });
    return out;
}

SignalTrace signal(const DensityMatrix &rho, const Hamiltonian &h, const Operator &m, double dt,
                   std::size_t count) {
    if (rho.dim() != m.dim() || m.dim() != h.op().dim()) {
        throw DimensionMismatch("signal: state, observable and Hamiltonian dimensions differ");
    }
    if (!(dt > 0.0) || count == 0) {
        throw Error("signal needs dt > 0 and at least one sample");
    }
    SignalTrace trace;
    trace.dt = dt;
    trace.samples.reserve(count);
    const Matrix rho_t = rho.matrix().transpose();
    for (std::size_t k = 0; k < count; ++k) {
        const auto mk = heisenberg_op(m, h, static_cast<double>(k) * dt);
        trace.samples.push_back(mk.matrix().cwiseProduct(rho_t).sum());
    }
    return trace;
}

std::vector<SpectrumPoint> spectrum(const SignalTrace &trace) {
    const std::size_t k = trace.samples.size();
    if (k < 2) {
        throw Error("spectrum needs at least two samples");
    }
    Eigen::FFT<double> fft;
    std::vector<Complex> freq;
    fft.fwd(freq, trace.samples);

    const double norm = 1.0 / std::sqrt(static_cast<double>(k));
    const double bin = 2.0 * std::numbers::pi / (static_cast<double>(k) * trace.dt);
    std::vector<SpectrumPoint> out(k);
    const std::size_t half = (k + 1) / 2;
    // Negative frequencies first: bins half..k-1 map to m - k.
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t m = (i + half) % k;
        const auto signed_m = static_cast<double>(m) - (m >= half ? static_cast<double>(k) : 0.0);
        out[i] = {signed_m * bin, std::abs(freq[m]) * norm};
    }
    return out;
}

std::vector<SpectrumPoint> find_peaks(const std::vector<SpectrumPoint> &spec, double rel_threshold) {
    std::vector<SpectrumPoint> peaks;
    if (spec.empty()) return peaks;
    const double top =
        std::max_element(spec.begin(), spec.end(), [](const auto &a, const auto &b) {
            return a.magnitude < b.magnitude;
        })->magnitude;
    if (!(top > 0.0)) return peaks;
    const double floor = rel_threshold * top;
    for (std::size_t i = 0; i < spec.size(); ++i) {
        const double v = spec[i].magnitude;
        if (v < floor) continue;
        const bool above_left = i == 0 || v > spec[i - 1].magnitude;
        const bool above_right = i + 1 == spec.size() || v >= spec[i + 1].magnitude;
        if (above_left && above_right) peaks.push_back(spec[i]);
    }
    return peaks;
}

} // namespace evqc
