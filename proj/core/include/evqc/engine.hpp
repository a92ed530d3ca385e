#pragma once

#include <string_view>

#include "evqc/funcspace.hpp"
#include "evqc/spinops.hpp"
#include "evqc/states.hpp"

namespace evqc {

/// Resolution parameter epsilon of an expectation-value machine. Two states
/// are told apart by M only if their expectations differ by more than
/// epsilon * Lambda(M).
class Resolution {
public:
    explicit Resolution(double epsilon);
    double epsilon() const noexcept { return epsilon_; }

private:
    double epsilon_;
};

enum class Decision { NotConstant, NotBalanced, NotInClass, Inconclusive };

std::string_view to_string(Decision d) noexcept;

/// Outcome of a classification protocol. Only exclusions are ever reported:
/// the machine can show a function is not constant (or not in the promised
/// class), never that it is.
struct Verdict {
    Decision decided = Decision::Inconclusive;
    double expectation = 0.0;
    // Expectation the protocol produces for a constant function.
    double gap_reference = 0.0;
    // Expectation for the competing promise class (balanced, or C_N).
    double class_reference = 0.0;
    Resolution resolution{1.0};
    double lambda = 0.0;
    unsigned n = 0;
};

/// Tr(M U_f rho U_f^dagger). Throws DimensionMismatch, NotHermitian (for M),
/// and Error if an imaginary residue survives.
double expectation(const Operator &m, const DensityMatrix &rho, const BoolFunc &f);

/// S_B(f) = sum_{j,k} (-1)^{f(j)+f(k)} B_jk, evaluated as s^T B s.
Complex s_functional(const Operator &b, const BoolFunc &f);

/// Same functional through Tr(B) + sum_{j<k} s_j s_k (B_jk + B_kj).
Complex s_functional_pairwise(const Operator &b, const BoolFunc &f);

/// B_jk = M_jk rho_kj (no sum), so that expectation == S_B.
Operator b_matrix(const DensityMatrix &rho, const Operator &m);

/// 1e-10 * max|B_jk| * N^2.
double default_balance_tol(const Operator &b);

bool is_balanced_wrt(const BoolFunc &f, const Operator &b, double tol);
bool is_balanced_wrt(const BoolFunc &f, const Operator &b);

/// |Tr(M rho1) - Tr(M rho2)| > epsilon * Lambda(M). Throws
/// DegenerateMeasurement when M is a multiple of the identity.
bool distinguishable(const Operator &m, const DensityMatrix &rho1, const DensityMatrix &rho2,
                     Resolution eps);

/// E(f0) - E(f1) = 2^(2-n) (1 - 2^-n) for the all-zero f0 and a single-one
/// f1 under M = rho = |w><w|.
double satisfiability_gap(unsigned n);

// Spectral ranges of the measurement operators used by the protocols. Unit
// tests pin these against spectral_range().
inline constexpr double kProjectorRange = 1.0;
inline double total_spin_range(unsigned n) { return static_cast<double>(n); }
inline constexpr double kSingleSpinRange = 1.0;

/// Measure |w><w| on the pseudopure state. NotBalanced near the constant
/// reference, NotConstant near the balanced one.
Verdict dj_decide_pseudopure(const BoolFunc &f, double alpha, Resolution eps);

/// Measure F_x on the pulsed thermal state. NotConstant near the C_N
/// reference (zero), NotInClass near the constant one.
Verdict cn_decide_thermal(const BoolFunc &f, const SpinSystem &sys, Resolution eps);

/// f on n-1 bits is lifted to n bits and I^1_x is measured on the pulsed
/// thermal state. No pseudopure preparation is needed.
Verdict dj_decide_lifted(const BoolFunc &f, const SpinSystem &sys, Resolution eps);

} // namespace evqc
