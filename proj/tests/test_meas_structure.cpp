#include <gtest/gtest.h>

#include <cmath>
#include <algorithm>
#include <numeric>
#include <random>

#include "evqc/engine.hpp"
#include "evqc/error.hpp"
#include "evqc/meas_structure.hpp"
#include "support/oracles.hpp"

using namespace evqc;

namespace {

double max_diff(const Matrix &a, const Matrix &b) { return (a - b).cwiseAbs().maxCoeff(); }

InvariantForm random_form(std::mt19937_64 &rng, unsigned n) {
    std::normal_distribution<double> g;
    const std::size_t dim = std::size_t{1} << n;
    InvariantForm f;
    f.c = g(rng);
    f.d = Eigen::VectorXd(static_cast<Eigen::Index>(dim));
    for (auto &x : f.d) x = g(rng);
    f.a_upper.resize(upper_count(dim));
    for (auto &x : f.a_upper) x = g(rng);
    return f;
}

DensityMatrix random_pseudopure(std::mt19937_64 &rng, unsigned n) {
    std::uniform_real_distribution<double> a(0.01, 1.0);
    return pseudopure(n, a(rng));
}

} // namespace

TEST(InvariantForm, DecomposeExamples) {
    const auto w = decompose_invariant(w_projector(2));
    EXPECT_NEAR(w.c, 1.0, 1e-14);
    EXPECT_LT(w.d.cwiseAbs().maxCoeff(), 1e-14);
    for (double a : w.a_upper) EXPECT_EQ(a, 0.0);

    Matrix m = 2.0 * w_projector(2).matrix();
    m.diagonal() += Eigen::Vector4cd(1, 2, 3, 4);
    const auto f = decompose_invariant(Operator(m));
    EXPECT_NEAR(f.c, 2.0, 1e-14);
    for (Eigen::Index k = 0; k < 4; ++k) EXPECT_NEAR(f.d(k), static_cast<double>(k + 1), 1e-14);

    EXPECT_THROW((void)decompose_invariant(total_spin(2, Axis::X)), NotInvariantForm);
    EXPECT_THROW((void)decompose_invariant(Operator(Matrix::Identity(1, 1))), DimensionMismatch);
}

TEST(InvariantForm, RoundTrip) {
    std::mt19937_64 rng(30);
    for (int t = 0; t < 200; ++t) {
        const unsigned n = 1 + t % 4;
        const auto form = random_form(rng, n);
        const auto back = decompose_invariant(reconstruct(form));
        EXPECT_NEAR(back.c, form.c, 1e-10);
        EXPECT_LT((back.d - form.d).cwiseAbs().maxCoeff(), 1e-10);
        for (std::size_t k = 0; k < form.a_upper.size(); ++k) {
            EXPECT_NEAR(back.a_upper[k], form.a_upper[k], 1e-10);
        }
    }
}

TEST(InvariantForm, ExpectationIgnoresAntisymmetricPart) {
    std::mt19937_64 rng(31);
    for (int t = 0; t < 200; ++t) {
        const unsigned n = 1 + t % 4;
        auto form = random_form(rng, n);
        const auto with_a = reconstruct(form);
        std::fill(form.a_upper.begin(), form.a_upper.end(), 0.0);
        const auto without_a = reconstruct(form);
        const auto rho = random_pseudopure(rng, n);
        const auto f = ref::random_function(rng, n);
        EXPECT_NEAR(expectation(with_a, rho, f), expectation(without_a, rho, f), 1e-10);
    }
}

TEST(InvariantForm, ExpectationDependsOnlyOnImbalance) {
    std::mt19937_64 rng(32);
    for (int t = 0; t < 100; ++t) {
        const unsigned n = 2 + t % 3;
        const auto m = reconstruct(random_form(rng, n));
        const auto rho = random_pseudopure(rng, n);
        const auto f = ref::random_function(rng, n);
        // Shuffle the truth table; imbalance is unchanged.
        std::vector<std::size_t> perm(f.size());
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        const auto g = BoolFunc::from_predicate(n, [&](std::size_t j) { return f(perm[j]); });
        EXPECT_NEAR(expectation(m, rho, f), expectation(m, rho, g), 1e-10);
    }
}

TEST(Permutation, InvariantFormPasses) {
    std::mt19937_64 rng(33);
    for (int t = 0; t < 50; ++t) {
        const unsigned n = 1 + t % 4;
        const auto check = check_permutation_invariance(reconstruct(random_form(rng, n)),
                                                        random_pseudopure(rng, n), 20, rng());
        EXPECT_TRUE(check.invariant);
        EXPECT_EQ(check.trials_run, 20U);
    }
}

TEST(Permutation, FxHasAWitness) {
    const auto fx = total_spin(2, Axis::X);
    const auto rho = pseudopure(2, 1.0);
    const auto check = find_permutation_violation(fx, rho);
    ASSERT_FALSE(check.invariant);
    ASSERT_TRUE(check.witness.has_value());
    const auto &w = *check.witness;
    EXPECT_NE(w.f(w.l), w.f(w.m));
    EXPECT_NEAR(w.e_f, expectation(fx, rho, w.f), 1e-14);
    EXPECT_NEAR(w.e_permuted, expectation(fx, rho, permute(w.f, w.l, w.m)), 1e-14);
    EXPECT_GT(std::abs(w.e_f - w.e_permuted), 1e-6);

    EXPECT_FALSE(check_permutation_invariance(fx, rho, 200, 1).invariant);
    EXPECT_TRUE(find_permutation_violation(w_projector(3), pseudopure(3, 0.5)).invariant);
    EXPECT_THROW((void)find_permutation_violation(w_projector(4), pure_w(4)), Infeasible);
}

TEST(NecessaryConditions, Examples) {
    const auto fx = total_spin(2, Axis::X);
    EXPECT_TRUE(necessary_conditions(total_spin(2, Axis::Y), fx).pass);
    const auto proj = necessary_conditions(w_projector(2), fx);
    EXPECT_FALSE(proj.pass);
    EXPECT_FALSE(proj.trace_ok);
    std::mt19937_64 rng(34);
    for (unsigned n = 1; n <= 4; ++n) {
        const auto f = total_spin(n, Axis::X);
        const Matrix v = ref::random_unitary(rng, Eigen::Index{1} << n);
        EXPECT_TRUE(necessary_conditions(Operator(v * f.matrix() * v.adjoint()), f).pass) << n;
    }
}

TEST(Search, OneSpinReachesUnitRatio) {
    const auto r = search_max_c_ratio(1, 20000, 7);
    EXPECT_TRUE(r.feasible);
    EXPECT_NEAR(r.ratio, 1.0, 1e-6);
    EXPECT_LT(r.residual, 1e-6);
    EXPECT_LE(r.evaluations, r.budget);
}

TEST(Search, TwoSpinsWithinKnownBounds) {
    const auto r = search_max_c_ratio(2, 100000, 0);
    ASSERT_TRUE(r.feasible);
    EXPECT_GE(r.ratio, 1.0 / std::sqrt(3.0) - 1e-3);
    EXPECT_LT(r.ratio, std::sqrt(2.0 / 3.0));
    EXPECT_LT(r.residual, 1e-6);
}

TEST(Search, FeasibleCandidatesPassIndependentChecks) {
    for (unsigned n : {1U, 2U}) {
        const auto r = search_max_c_ratio(n, 20000, 3);
        ASSERT_TRUE(r.feasible);
        const auto m = reconstruct(r.best);
        const auto fx = total_spin(n, Axis::X);
        EXPECT_TRUE(unitarily_equivalent(m, fx, 1e-6));
        EXPECT_TRUE(necessary_conditions(m, fx).pass);
        EXPECT_NEAR(m.trace().real(), 0.0, 1e-12);
        EXPECT_NEAR(r.ratio, std::abs(decompose_invariant(m, 1e-9).c) / spectral_range(m), 1e-9);
    }
}

TEST(Search, SeedDeterminesResultExactly) {
    SearchOptions a;
    a.budget = 20000;
    a.seed = 99;
    a.threads = 1;
    SearchOptions b = a;
    b.threads = 3;
    const auto x = search_max_c_ratio(2, a);
    const auto y = search_max_c_ratio(2, b);
    EXPECT_EQ(x.ratio, y.ratio);
    EXPECT_EQ(x.residual, y.residual);
    EXPECT_EQ(x.best_restart, y.best_restart);
    EXPECT_EQ(x.evaluations, y.evaluations);
}

TEST(Search, TinyBudgetReportsBestInfeasible) {
    SearchOptions o;
    o.budget = 10;
    o.restarts = 10;
    const auto r = search_max_c_ratio(3, o);
    EXPECT_FALSE(r.feasible);
    EXPECT_GT(r.residual, o.feasibility_tol);
    EXPECT_TRUE(std::isfinite(r.ratio));
}

TEST(Search, Validation) {
    EXPECT_THROW((void)search_max_c_ratio(0, 100, 0), Infeasible);
    SearchOptions o;
    o.budget = 0;
    EXPECT_THROW((void)search_max_c_ratio(1, o), Error);
}
