#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "evqc/engine.hpp"
#include "evqc/error.hpp"
#include "evqc/timedomain.hpp"
#include "support/oracles.hpp"

using namespace evqc;

namespace {

double max_diff(const Matrix &a, const Matrix &b) { return (a - b).cwiseAbs().maxCoeff(); }

} // namespace

TEST(Hamiltonian, DiagonalEntries) {
    const auto h1 = hamiltonian(SpinSystem({3.0}, 1.0));
    EXPECT_EQ(h1.op()(0, 0), Complex(1.5));
    EXPECT_EQ(h1.op()(1, 1), Complex(-1.5));

    const double w1 = 5.0;
    const double w2 = 2.0;
    const auto h2 = hamiltonian(SpinSystem({w1, w2}, 1.0));
    const std::vector<double> want{(w1 + w2) / 2, (w1 - w2) / 2, (-w1 + w2) / 2, -(w1 + w2) / 2};
    for (Eigen::Index k = 0; k < 4; ++k) EXPECT_NEAR(h2.op()(k, k).real(), want[static_cast<std::size_t>(k)], 1e-15);
    EXPECT_TRUE(h2.op().is_diagonal());
}

TEST(Hamiltonian, MatchesKroneckerSum) {
    std::mt19937_64 rng(50);
    std::uniform_real_distribution<double> w(1.0, 10.0);
    for (unsigned n = 2; n <= 4; ++n) {
        std::vector<double> omega(n);
        for (auto &x : omega) x = w(rng);
        const SpinSystem sys(omega, 1.0, {{1, 2, 0.7}, {1, n, -0.3}});
        const auto d = Eigen::Index{1} << n;
        Matrix want = Matrix::Zero(d, d);
        for (unsigned i = 1; i <= n; ++i) want += omega[i - 1] * ref::kron_spin(n, i, 'z');
        for (const auto &c : sys.couplings()) {
            want += 2.0 * std::numbers::pi * c.J * ref::kron_spin(n, c.i, 'z') * ref::kron_spin(n, c.j, 'z');
        }
        EXPECT_LT(max_diff(hamiltonian(sys).op().matrix(), want), 1e-12);
    }
}

TEST(Heisenberg, ZeroTimeAndRotation) {
    const double w = 2.3;
    const auto h = hamiltonian(SpinSystem({w}, 1.0));
    const auto ix = single_spin(1, 1, Axis::X);
    const auto iy = single_spin(1, 1, Axis::Y);
    EXPECT_EQ(max_diff(heisenberg_op(ix, h, 0.0).matrix(), ix.matrix()), 0.0);
    for (double t : {0.1, 0.7, 3.0}) {
        const Matrix want = std::cos(w * t) * ix.matrix() - std::sin(w * t) * iy.matrix();
        EXPECT_LT(max_diff(heisenberg_op(ix, h, t).matrix(), want), 1e-14);
    }
}

TEST(Heisenberg, PhasePathMatchesDenseExponential) {
    std::mt19937_64 rng(51);
    for (unsigned n = 1; n <= 4; ++n) {
        const auto sys = default_spin_system(n);
        const auto h = hamiltonian(sys);
        const Operator m(ref::random_hermitian(rng, Eigen::Index{1} << n));
        for (double t : {1e-4, 3.3e-3}) {
            EXPECT_LT(max_diff(heisenberg_op(m, h, t).matrix(), heisenberg_op_dense(m, h.op(), t).matrix()),
                      1e-10);
        }
    }
}

TEST(Signal, SingleSpinCosine) {
    const double w = 2.0 * std::numbers::pi * 50.0;
    const double theta = 0.01 / w;
    const SpinSystem sys({w}, theta);
    const auto h = hamiltonian(sys);
    const auto rho = pulsed_thermal(sys);
    const auto ix = single_spin(1, 1, Axis::X);
    const double dt = 1e-3;
    const auto trace = signal(rho, h, ix, dt, 256);
    ASSERT_EQ(trace.samples.size(), 256U);
    for (std::size_t k = 0; k < 256; ++k) {
        const double t = static_cast<double>(k) * dt;
        const double want = -(0.01 / 4.0) * std::cos(w * t);
        EXPECT_NEAR(trace.samples[k].real(), want, 1e-12);
        EXPECT_NEAR(trace.samples[k].imag(), 0.0, 1e-12);
        const Matrix dense = heisenberg_op_dense(ix, h.op(), t).matrix();
        EXPECT_NEAR((dense * rho.matrix()).trace().real(), want, 1e-12);
    }
}

TEST(Signal, FirstSampleIsTheStaticExpectation) {
    const auto sys = default_spin_system(3);
    const auto rho = pulsed_thermal(sys);
    const auto fx = total_spin(3, Axis::X);
    const auto trace = signal(rho, hamiltonian(sys), fx, 1e-4, 4);
    EXPECT_NEAR(trace.samples[0].real(), expectation(fx, rho, BoolFunc(3)), 1e-15);
}

TEST(Signal, ThermalStateUnderFxIsZero) {
    for (unsigned n = 1; n <= 4; ++n) {
        const auto sys = default_spin_system(n);
        const auto trace = signal(thermal_state(sys), hamiltonian(sys), total_spin(n, Axis::X), 1e-4, 64);
        for (auto s : trace.samples) EXPECT_EQ(std::abs(s), 0.0);
        EXPECT_TRUE(find_peaks(spectrum(trace)).empty());
    }
}

TEST(Signal, RealForHermitianInputs) {
    std::mt19937_64 rng(52);
    const auto sys = SpinSystem({900.0, 1400.0, 2100.0}, 1e-4, {{1, 2, 7.0}});
    const auto h = hamiltonian(sys);
    const DensityMatrix rho(Operator(ref::random_density(rng, 8)));
    const Operator m(ref::random_hermitian(rng, 8));
    for (auto s : signal(rho, h, m, 3e-4, 100).samples) EXPECT_LT(std::abs(s.imag()), 1e-12);
}

TEST(Signal, Validation) {
    const auto sys = default_spin_system(2);
    EXPECT_THROW((void)signal(pure_w(2), hamiltonian(sys), total_spin(2, Axis::X), 0.0, 10), Error);
    EXPECT_THROW((void)signal(pure_w(2), hamiltonian(sys), total_spin(2, Axis::X), 1e-3, 0), Error);
    EXPECT_THROW((void)signal(pure_w(3), hamiltonian(sys), total_spin(2, Axis::X), 1e-3, 5), DimensionMismatch);
}

TEST(Spectrum, CosinePeaksAtPlusMinusOmega) {
    const std::size_t k = 512;
    const double dt = 1e-3;
    const double bin = 2.0 * std::numbers::pi / (static_cast<double>(k) * dt);
    const double w = 37.3 * bin;
    const SpinSystem sys({w}, 0.01 / w);
    const auto trace = signal(pulsed_thermal(sys), hamiltonian(sys), single_spin(1, 1, Axis::X), dt, k);
    const auto spec = spectrum(trace);
    ASSERT_EQ(spec.size(), k);
    for (std::size_t i = 1; i < spec.size(); ++i) EXPECT_GT(spec[i].omega, spec[i - 1].omega);
    const auto peaks = find_peaks(spec, 0.5);
    ASSERT_EQ(peaks.size(), 2U);
    EXPECT_NEAR(peaks[0].omega, -w, bin);
    EXPECT_NEAR(peaks[1].omega, w, bin);
}

TEST(Spectrum, Parseval) {
    std::mt19937_64 rng(53);
    const auto sys = SpinSystem({700.0, 1300.0}, 1e-5, {{1, 2, 11.0}});
    const DensityMatrix rho(Operator(ref::random_density(rng, 4)));
    const auto trace = signal(rho, hamiltonian(sys), total_spin(2, Axis::X), 2e-4, 300);
    double time_energy = 0.0;
    for (auto s : trace.samples) time_energy += std::norm(s);
    double freq_energy = 0.0;
    for (const auto &p : spectrum(trace)) freq_energy += p.magnitude * p.magnitude;
    EXPECT_NEAR(freq_energy / time_energy, 1.0, 1e-9);
}

TEST(Spectrum, CoupledPairResolvesFourLines) {
    // Well-separated Larmor lines split by J: n 2^(n-1) = 4 peaks.
    const double two_pi = 2.0 * std::numbers::pi;
    const SpinSystem sys({two_pi * 100.0, two_pi * 260.0}, 1e-6, {{1, 2, 20.0}});
    const std::size_t k = 2048;
    const double dt = 1.0 / 1024.0;
    const auto trace = signal(pulsed_thermal(sys), hamiltonian(sys), total_spin(2, Axis::X), dt, k);
    std::size_t positive = 0;
    for (const auto &p : find_peaks(spectrum(trace), 0.2)) {
        if (p.omega > 0.0) ++positive;
    }
    EXPECT_EQ(positive, 4U);
}

TEST(Spectrum, Validation) {
    SignalTrace t;
    t.dt = 1.0;
    t.samples = {Complex(1.0)};
    EXPECT_THROW((void)spectrum(t), Error);
    EXPECT_TRUE(find_peaks({}).empty());
}
