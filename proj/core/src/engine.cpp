#include "evqc/engine.hpp"

#include <cassert>
#include <cmath>

#include "evqc/error.hpp"

namespace evqc {

namespace {

void require_dims(std::size_t a, std::size_t b, const char *what) {
    if (a != b) {
        throw DimensionMismatch(std::string(what) + ": dimension " + std::to_string(a) + " vs " +
                                std::to_string(b));
    }
}

Eigen::VectorXd sign_vector(const BoolFunc &f) {
    Eigen::VectorXd s(static_cast<Eigen::Index>(f.size()));
    for (std::size_t j = 0; j < f.size(); ++j) {
        s(static_cast<Eigen::Index>(j)) = f.sign(j);
    }
    return s;
}

// Two references a, b and a margin m = epsilon * Lambda. Inside m of both
// references the machine cannot tell them apart. Otherwise the verdict
// excludes whichever reference E is resolvably away from, preferring the
// nearer reference when E is clear of both (functions outside the promise).
Decision decide(double e, double constant_ref, double class_ref, double margin,
                Decision near_class, Decision near_constant) {
    const double dc = std::abs(e - constant_ref);
    const double da = std::abs(e - class_ref);
    const bool close_c = dc <= margin;
    const bool close_a = da <= margin;
    if (close_c && close_a) return Decision::Inconclusive;
    if (close_c) return near_constant;
    if (close_a) return near_class;
    return dc <= da ? near_constant : near_class;
}

Verdict make_verdict(double e, double constant_ref, double class_ref, double lambda, Resolution eps,
                     unsigned n, Decision near_class, Decision near_constant) {
    Verdict v;
    v.expectation = e;
    v.gap_reference = constant_ref;
    v.class_reference = class_ref;
    v.resolution = eps;
    v.lambda = lambda;
    v.n = n;
    v.decided = decide(e, constant_ref, class_ref, eps.epsilon() * lambda, near_class, near_constant);
    return v;
}

// Neumaier summation. The protocols sum N^2 terms that cancel exactly in
// exact arithmetic (balanced functions); plain summation leaves ~1e-19 dust.
struct NeumaierSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double x) {
        const double t = sum + x;
        comp += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
        sum = t;
    }
    double value() const { return sum + comp; }
};

} // namespace

Resolution::Resolution(double epsilon) : epsilon_(epsilon) {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
        throw Error("resolution epsilon must be positive and finite");
    }
}

std::string_view to_string(Decision d) noexcept {
    switch (d) {
    case Decision::NotConstant: return "NotConstant";
    case Decision::NotBalanced: return "NotBalanced";
    case Decision::NotInClass: return "NotInClass";
    case Decision::Inconclusive: return "Inconclusive";
    }
    return "Inconclusive";
}

double expectation(const Operator &m, const DensityMatrix &rho, const BoolFunc &f) {
    require_dims(m.dim(), rho.dim(), "expectation");
    require_dims(m.dim(), f.size(), "expectation");
    if (!m.is_hermitian()) {
        throw NotHermitian("measurement operator must be hermitian");
    }
    // Tr(M U rho U^dagger) = sum_jk M_jk rho_kj s_j s_k with s = (-1)^f.
    const auto &mm = m.matrix();
    const auto &r = rho.matrix();
    const auto dim = mm.rows();
    NeumaierSum re, im;
    double scale = 0.0;
    for (Eigen::Index k = 0; k < dim; ++k) {
        const bool fk = f(static_cast<std::size_t>(k));
        for (Eigen::Index j = 0; j < dim; ++j) {
            Complex t = mm(j, k) * r(k, j);
            if (fk != f(static_cast<std::size_t>(j))) t = -t;
            re.add(t.real());
            im.add(t.imag());
            scale += std::abs(t.real()) + std::abs(t.imag());
        }
    }
    const Complex tr(re.value(), im.value());
    if (std::abs(tr.imag()) > 1e-10 * (1.0 + scale)) {
        throw Error("expectation has an imaginary part " + std::to_string(tr.imag()) +
                    "; an input is not hermitian");
    }
    return tr.real();
}

Complex s_functional(const Operator &b, const BoolFunc &f) {
    require_dims(b.dim(), f.size(), "s_functional");
    const Eigen::VectorXcd s = sign_vector(f).cast<Complex>();
    const Complex value = s.transpose() * (b.matrix() * s);
#ifndef NDEBUG
    const Complex check = s_functional_pairwise(b, f);
    assert(std::abs(value - check) <= 1e-9 * (1.0 + b.matrix().cwiseAbs().sum()));
#endif
    return value;
}

Complex s_functional_pairwise(const Operator &b, const BoolFunc &f) {
    require_dims(b.dim(), f.size(), "s_functional");
    const auto &mat = b.matrix();
    const auto dim = static_cast<Eigen::Index>(f.size());
    Complex total = mat.trace();
    for (Eigen::Index j = 0; j + 1 < dim; ++j) {
        const int sj = f.sign(static_cast<std::size_t>(j));
        for (Eigen::Index k = j + 1; k < dim; ++k) {
            const int sk = f.sign(static_cast<std::size_t>(k));
            total += static_cast<double>(sj * sk) * (mat(j, k) + mat(k, j));
        }
    }
    return total;
}

Operator b_matrix(const DensityMatrix &rho, const Operator &m) {
    require_dims(m.dim(), rho.dim(), "b_matrix");
    return Operator(m.matrix().cwiseProduct(rho.matrix().transpose()));
}

double default_balance_tol(const Operator &b) {
    const auto n = static_cast<double>(b.dim());
    return 1e-10 * b.matrix().cwiseAbs().maxCoeff() * n * n;
}

bool is_balanced_wrt(const BoolFunc &f, const Operator &b, double tol) {
    return std::abs(s_functional(b, f)) <= tol;
}

bool is_balanced_wrt(const BoolFunc &f, const Operator &b) {
    return is_balanced_wrt(f, b, default_balance_tol(b));
}

bool distinguishable(const Operator &m, const DensityMatrix &rho1, const DensityMatrix &rho2,
                     Resolution eps) {
    require_dims(m.dim(), rho1.dim(), "distinguishable");
    require_dims(m.dim(), rho2.dim(), "distinguishable");
    const double lambda = spectral_range(m);
    const double scale = std::max(1.0, m.matrix().cwiseAbs().maxCoeff());
    if (lambda <= 1e-12 * scale) {
        throw DegenerateMeasurement("measurement is proportional to the identity (Lambda = 0)");
    }
    const double e1 = (m.matrix().cwiseProduct(rho1.matrix().transpose())).sum().real();
    const double e2 = (m.matrix().cwiseProduct(rho2.matrix().transpose())).sum().real();
    return std::abs(e1 - e2) > eps.epsilon() * lambda;
}

double satisfiability_gap(unsigned n) {
    if (n == 0) {
        throw Error("satisfiability gap needs n >= 1");
    }
    return std::ldexp(1.0, 2 - static_cast<int>(n)) * (1.0 - std::ldexp(1.0, -static_cast<int>(n)));
}

Verdict dj_decide_pseudopure(const BoolFunc &f, double alpha, Resolution eps) {
    const unsigned n = f.bits();
    const double dim = static_cast<double>(f.size());
    if (!(alpha > 0.0) || alpha > dim) {
        throw Error("pseudopure alpha must lie in (0, N]");
    }
    const auto m = w_projector(n);
    const auto rho = pseudopure(n, alpha);
    const double e = expectation(m, rho, f);
    const double constant_ref = expectation(m, rho, BoolFunc::constant(n, false));
    const double balanced_ref = expectation(m, rho, canonical_balanced(n));
    return make_verdict(e, constant_ref, balanced_ref, kProjectorRange, eps, n,
                        Decision::NotConstant, Decision::NotBalanced);
}

Verdict cn_decide_thermal(const BoolFunc &f, const SpinSystem &sys, Resolution eps) {
    const unsigned n = f.bits();
    if (n < 2) {
        throw ClassUndefined("C_N protocol needs n >= 2");
    }
    if (sys.n() != n) {
        throw DimensionMismatch("spin system has " + std::to_string(sys.n()) +
                                " spins but f has " + std::to_string(n) + " bits");
    }
    const auto m = total_spin(n, Axis::X);
    const auto rho = pulsed_thermal(sys);
    const double e = expectation(m, rho, f);
    const double constant_ref = expectation(m, rho, BoolFunc::constant(n, false));
    const double cn_ref = expectation(m, rho, canonical_cn(n));
    return make_verdict(e, constant_ref, cn_ref, total_spin_range(n), eps, n,
                        Decision::NotConstant, Decision::NotInClass);
}

Verdict dj_decide_lifted(const BoolFunc &f, const SpinSystem &sys, Resolution eps) {
    const unsigned n = f.bits() + 1;
    if (sys.n() != n) {
        throw DimensionMismatch("lifted protocol needs " + std::to_string(n) +
                                " spins for a function on " + std::to_string(f.bits()) +
                                " bits, got " + std::to_string(sys.n()));
    }
    const auto m = single_spin(n, 1, Axis::X);
    const auto rho = pulsed_thermal(sys);
    const double e = expectation(m, rho, lift(f));
    const double constant_ref = expectation(m, rho, lift(BoolFunc::constant(f.bits(), false)));
    const double balanced_ref = expectation(m, rho, lift(canonical_balanced(f.bits())));
    return make_verdict(e, constant_ref, balanced_ref, kSingleSpinRange, eps, n,
                        Decision::NotConstant, Decision::NotBalanced);
}

} // namespace evqc
