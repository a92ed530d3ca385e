#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "evqc/funcspace.hpp"
#include "evqc/spinops.hpp"
#include "evqc/states.hpp"

namespace evqc {

/// M = c |w><w| + diag(D) + A with A = i * (real antisymmetric). The
/// strictly-upper imaginary parts of A are stored row-major in a_upper:
/// (0,1), (0,2), ..., (0,N-1), (1,2), ...
struct InvariantForm {
    double c = 0.0;
    Eigen::VectorXd d;
    std::vector<double> a_upper;

    std::size_t dim() const noexcept { return static_cast<std::size_t>(d.size()); }
};

inline std::size_t upper_count(std::size_t dim) { return dim * (dim - 1) / 2; }

Operator reconstruct(const InvariantForm &form);

/// Inverse of reconstruct for hermitian M whose symmetrized off-diagonal
/// entries M_jk + M_kj all agree within tol. Throws NotInvariantForm
/// otherwise; expectations under such an M depend on more than I(f).
InvariantForm decompose_invariant(const Operator &m, double tol = 1e-10);

struct PermutationWitness {
    BoolFunc f;
    std::size_t l = 0;
    std::size_t m = 0;
    double e_f = 0.0;
    double e_permuted = 0.0;
};

struct PermutationCheck {
    bool invariant = true;
    std::size_t trials_run = 0;
    std::optional<PermutationWitness> witness;
};

/// Samples (f, l, m) with f(l) != f(m) and compares E(f) with E(P_lm f).
/// Stops at the first violation.
PermutationCheck check_permutation_invariance(const Operator &m, const DensityMatrix &rho,
                                              std::size_t trials, std::uint64_t seed);

/// Every f on n <= 3 bits against every transposition l < m.
PermutationCheck find_permutation_violation(const Operator &m, const DensityMatrix &rho);

struct EigenCondition {
    double lambda = 0.0;
    double det_abs = 0.0;
    bool vanishes = false;
};

struct ConditionReport {
    std::vector<EigenCondition> eigen;
    double trace_m = 0.0;
    double trace_reference = 0.0;
    bool trace_ok = false;
    bool pass = false;
};

/// For each eigenvalue lambda_k of the reference, |det(M - lambda_k)| <= tol,
/// and Tr M == Tr reference within tol.
ConditionReport necessary_conditions(const Operator &m, const Operator &reference, double tol = 1e-6);

struct SearchOptions {
    std::size_t budget = 100000;
    std::size_t restarts = 50;
    std::uint64_t seed = 0;
    // Largest |lambda_k(M) - lambda_k(F_x)| for a candidate to count as feasible.
    double feasibility_tol = 1e-6;
    // Target of the final polish.
    double polish_tol = 1e-9;
    // 0 picks std::thread::hardware_concurrency().
    unsigned threads = 0;
};

struct SearchResult {
    unsigned n = 0;
    InvariantForm best;
    double ratio = 0.0;
    // max_k |lambda_k(M) - lambda_k(F_x)| of the reported candidate.
    double residual = 0.0;
    bool feasible = false;
    std::size_t budget = 0;
    std::size_t evaluations = 0;
    std::size_t best_restart = 0;
    std::uint64_t seed = 0;
};

/// Maximizes |c| / Lambda(M) over invariant-form M isospectral with F_x.
/// Each restart runs a penalty continuation (mismatch^2 - mu c / n with mu
/// shrinking) followed by a Levenberg-Marquardt polish at fixed c, backing c
/// off by bisection when the polish cannot close the residual. Restarts are
/// independent and merged by index, so the result depends only on the seed.
SearchResult search_max_c_ratio(unsigned n, const SearchOptions &options);
SearchResult search_max_c_ratio(unsigned n, std::size_t budget, std::uint64_t seed);

} // namespace evqc
