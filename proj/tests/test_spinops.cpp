#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "evqc/error.hpp"
#include "evqc/spinops.hpp"
#include "support/oracles.hpp"

using namespace evqc;

namespace {

double max_diff(const Matrix &a, const Matrix &b) { return (a - b).cwiseAbs().maxCoeff(); }

} // namespace

TEST(SingleSpin, OneSpinMatrices) {
    Matrix ix(2, 2);
    ix << 0, 0.5, 0.5, 0;
    Matrix iy(2, 2);
    iy << 0, Complex(0, -0.5), Complex(0, 0.5), 0;
    EXPECT_EQ(max_diff(single_spin(1, 1, Axis::X).matrix(), ix), 0.0);
    EXPECT_EQ(max_diff(single_spin(1, 1, Axis::Y).matrix(), iy), 0.0);
}

TEST(SingleSpin, MatchesKroneckerConstruction) {
    for (unsigned n = 1; n <= 4; ++n) {
        for (unsigned i = 1; i <= n; ++i) {
            for (auto [axis, c] : {std::pair{Axis::X, 'x'}, {Axis::Y, 'y'}, {Axis::Z, 'z'}}) {
                EXPECT_EQ(max_diff(single_spin(n, i, axis).matrix(), ref::kron_spin(n, i, c)), 0.0)
                    << "n=" << n << " i=" << i << " axis=" << c;
            }
        }
    }
}

TEST(SingleSpin, MsbSupportPattern) {
    for (unsigned n = 1; n <= 4; ++n) {
        for (unsigned i = 1; i <= n; ++i) {
            const Matrix m = single_spin(n, i, Axis::X).matrix();
            const std::size_t flip = std::size_t{1} << (n - i);
            for (Eigen::Index l = 0; l < m.rows(); ++l) {
                for (Eigen::Index k = 0; k < m.cols(); ++k) {
                    const bool expected = (static_cast<std::size_t>(l ^ k)) == flip;
                    EXPECT_EQ(m(l, k) != Complex(0.0), expected);
                }
            }
        }
    }
}

TEST(SingleSpin, TracelessAndHermitian) {
    for (unsigned n = 1; n <= 5; ++n) {
        for (auto axis : {Axis::X, Axis::Y, Axis::Z}) {
            for (unsigned i = 1; i <= n; ++i) {
                const auto op = single_spin(n, i, axis);
                EXPECT_TRUE(op.is_hermitian());
                EXPECT_EQ(op.trace(), Complex(0.0));
            }
            EXPECT_EQ(total_spin(n, axis).trace(), Complex(0.0));
        }
    }
}

TEST(SingleSpin, ProductRuleBetweenSpins) {
    // (I_x^j)_{lm} (I_x^k)_{ml} is 1/4 where both are nonzero iff j == k.
    for (unsigned n = 1; n <= 4; ++n) {
        for (unsigned j = 1; j <= n; ++j) {
            for (unsigned k = 1; k <= n; ++k) {
                const Matrix a = single_spin(n, j, Axis::X).matrix();
                const Matrix b = single_spin(n, k, Axis::X).matrix();
                for (Eigen::Index l = 0; l < a.rows(); ++l) {
                    for (Eigen::Index m = 0; m < a.cols(); ++m) {
                        const Complex p = a(l, m) * b(m, l);
                        if (a(l, m) != Complex(0.0) && b(m, l) != Complex(0.0)) {
                            EXPECT_EQ(p, Complex(j == k ? 0.25 : 0.0));
                        } else {
                            EXPECT_EQ(p, Complex(0.0));
                        }
                    }
                }
            }
        }
    }
}

TEST(SingleSpin, RejectsBadIndices) {
    EXPECT_THROW((void)single_spin(2, 0, Axis::X), IndexOutOfRange);
    EXPECT_THROW((void)single_spin(2, 3, Axis::X), IndexOutOfRange);
    EXPECT_THROW((void)single_spin(0, 1, Axis::X), Infeasible);
    EXPECT_THROW((void)single_spin(kMaxDenseSpins + 1, 1, Axis::X), Infeasible);
}

TEST(TotalSpin, MatchesKroneckerSum) {
    for (unsigned n = 1; n <= 4; ++n) {
        EXPECT_LT(max_diff(total_spin(n, Axis::X).matrix(), ref::kron_total(n, 'x')), 1e-15);
        EXPECT_LT(max_diff(total_spin(n, Axis::Y).matrix(), ref::kron_total(n, 'y')), 1e-15);
    }
    EXPECT_EQ(max_diff(total_spin(1, Axis::X).matrix(), single_spin(1, 1, Axis::X).matrix()), 0.0);
}

TEST(SpectralRange, Examples) {
    EXPECT_NEAR(spectral_range(total_spin(2, Axis::X)), 2.0, 1e-12);
    EXPECT_NEAR(spectral_range(total_spin(3, Axis::X)), 3.0, 1e-12);
    for (unsigned n = 1; n <= 5; ++n) {
        EXPECT_NEAR(spectral_range(single_spin(n, 1, Axis::X)), 1.0, 1e-12);
        EXPECT_NEAR(spectral_range(w_projector(n)), 1.0, 1e-12);
    }
}

TEST(EigMultiset, Examples) {
    const auto one = eig_multiset(single_spin(1, 1, Axis::X)).values;
    ASSERT_EQ(one.size(), 2U);
    EXPECT_NEAR(one[0], -0.5, 1e-14);
    EXPECT_NEAR(one[1], 0.5, 1e-14);

    const auto fx = eig_multiset(total_spin(2, Axis::X)).values;
    const std::vector<double> want{-1.0, 0.0, 0.0, 1.0};
    for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(fx[k], want[k], 1e-12);

    Eigen::VectorXcd d(4);
    d << 3.0, -1.0, 2.0, 0.5;
    const auto diag = eig_multiset(Operator::diagonal(d)).values;
    EXPECT_EQ(diag, (std::vector<double>{-1.0, 0.5, 2.0, 3.0}));
}

TEST(EigMultiset, RejectsNonHermitian) {
    Matrix m(2, 2);
    m << 0, 1, 0, 0;
    EXPECT_THROW((void)eig_multiset(Operator(m)), NotHermitian);
}

TEST(UnitaryEquivalence, Examples) {
    EXPECT_TRUE(unitarily_equivalent(total_spin(2, Axis::X), total_spin(2, Axis::Y)));
    EXPECT_FALSE(unitarily_equivalent(total_spin(2, Axis::X), w_projector(2)));
    std::mt19937_64 rng(5);
    for (int t = 0; t < 20; ++t) {
        const auto d = Eigen::Index{1} << (1 + t % 4);
        const Matrix m = ref::random_hermitian(rng, d);
        const Matrix v = ref::random_unitary(rng, d);
        EXPECT_TRUE(unitarily_equivalent(Operator(m), Operator(v * m * v.adjoint())));
    }
}

TEST(UnitaryEquivalence, ConjugatedFxIsNeverAProjector) {
    std::mt19937_64 rng(9);
    for (unsigned n = 1; n <= 4; ++n) {
        const auto fx = total_spin(n, Axis::X).matrix();
        const auto d = fx.rows();
        for (int t = 0; t < 10; ++t) {
            const Matrix v = ref::random_unitary(rng, d);
            const Matrix c = v * fx * v.adjoint();
            EXPECT_NEAR(c.trace().real(), 0.0, 1e-12);
            EXPECT_GT((c * c - c).cwiseAbs().maxCoeff(), 1e-3);
        }
    }
}

TEST(Oracle, Examples) {
    EXPECT_EQ(max_diff(oracle(BoolFunc::constant(3, false)).matrix(), Matrix::Identity(8, 8)), 0.0);
    const std::vector<int> v{0, 1};
    const auto u = oracle(BoolFunc::from_values(1, v));
    EXPECT_TRUE(u.is_diagonal());
    EXPECT_TRUE(u.is_unitary());
    EXPECT_EQ(u(0, 0), Complex(1.0));
    EXPECT_EQ(u(1, 1), Complex(-1.0));
}

TEST(WProjector, OneSpinAndIdempotent) {
    const auto w = w_projector(1);
    EXPECT_EQ(max_diff(w.matrix(), Matrix::Constant(2, 2, 0.5)), 0.0);
    for (unsigned n = 1; n <= 5; ++n) {
        const Matrix p = w_projector(n).matrix();
        EXPECT_LT(max_diff(p * p, p), 1e-14);
    }
}

TEST(Operator, StructureFlagsAndAlgebra) {
    const auto x = single_spin(2, 1, Axis::X);
    const auto z = single_spin(2, 2, Axis::Z);
    EXPECT_FALSE(x.is_diagonal());
    EXPECT_TRUE(z.is_diagonal());
    const auto prod = x * z;
    EXPECT_LT(max_diff(prod.matrix(), x.matrix() * z.matrix()), 1e-15);
    EXPECT_LT(max_diff((x + z - z).matrix(), x.matrix()), 1e-15);
    EXPECT_THROW((void)(x + single_spin(1, 1, Axis::X)), DimensionMismatch);
    Matrix rect(2, 3);
    rect.setZero();
    EXPECT_THROW((void)Operator(rect), DimensionMismatch);
}

TEST(OperatorDump, RoundTripIsExact) {
    std::mt19937_64 rng(21);
    const Operator m(ref::random_hermitian(rng, 8));
    std::stringstream ss(operator_dump(m));
    const auto back = read_operator_dump(ss);
    EXPECT_EQ(max_diff(back.matrix(), m.matrix()), 0.0);
}

TEST(OperatorDump, Malformed) {
    std::stringstream a("size=2\n");
    EXPECT_THROW((void)read_operator_dump(a), ParseError);
    std::stringstream b("dim=2\n1,0\n0,0\n");
    EXPECT_THROW((void)read_operator_dump(b), ParseError);
    std::stringstream c("dim=1\n1;0\n");
    EXPECT_THROW((void)read_operator_dump(c), ParseError);
}
