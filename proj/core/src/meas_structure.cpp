#include "evqc/meas_structure.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

#include "evqc/engine.hpp"
#include "evqc/error.hpp"

namespace evqc {

Operator reconstruct(const InvariantForm &form) {
    const std::size_t dim = form.dim();
    if (dim < 2 || form.a_upper.size() != upper_count(dim)) {
        throw DimensionMismatch("invariant form needs N >= 2 and N(N-1)/2 antisymmetric entries");
    }
    const auto d = static_cast<Eigen::Index>(dim);
    Matrix m = Matrix::Constant(d, d, Complex(form.c / static_cast<double>(dim), 0.0));
    m.diagonal() += form.d.cast<Complex>();
    std::size_t idx = 0;
    for (Eigen::Index j = 0; j < d; ++j) {
        for (Eigen::Index k = j + 1; k < d; ++k, ++idx) {
            m(j, k) += Complex(0.0, form.a_upper[idx]);
            m(k, j) -= Complex(0.0, form.a_upper[idx]);
        }
    }
    return Operator(std::move(m));
}

InvariantForm decompose_invariant(const Operator &m, double tol) {
    if (!m.is_hermitian()) {
        throw NotHermitian("decompose_invariant requires a hermitian operator");
    }
    const auto &mat = m.matrix();
    const auto d = static_cast<Eigen::Index>(m.dim());
    if (d < 2) {
        throw DimensionMismatch("decompose_invariant needs N >= 2");
    }
    const Complex common = mat(0, 1) + mat(1, 0);
    for (Eigen::Index j = 0; j < d; ++j) {
        for (Eigen::Index k = j + 1; k < d; ++k) {
            if (std::abs(mat(j, k) + mat(k, j) - common) > tol) {
                throw NotInvariantForm("symmetrized entries differ at (" + std::to_string(j) + "," +
                                       std::to_string(k) + ")");
            }
        }
    }
    InvariantForm form;
    const double dim = static_cast<double>(d);
    form.c = dim * common.real() / 2.0;
    form.d = mat.diagonal().real().array() - form.c / dim;
    form.a_upper.reserve(upper_count(m.dim()));
    for (Eigen::Index j = 0; j < d; ++j) {
        for (Eigen::Index k = j + 1; k < d; ++k) {
            form.a_upper.push_back(mat(j, k).imag());
        }
    }
    const double err = (reconstruct(form).matrix() - mat).cwiseAbs().maxCoeff();
    if (err > tol) {
        throw NotInvariantForm("reconstruction misses M by " + std::to_string(err));
    }
    return form;
}

namespace {

double tolerance_for(const Operator &m, const DensityMatrix &rho) {
    return 1e-10 * std::max(1.0, m.matrix().cwiseAbs().maxCoeff()) *
           std::max(1.0, rho.matrix().cwiseAbs().maxCoeff() * static_cast<double>(m.dim()));
}

std::optional<PermutationWitness> test_transposition(const Operator &m, const DensityMatrix &rho,
                                                     const BoolFunc &f, std::size_t l,
                                                     std::size_t k, double tol) {
    const double e_f = expectation(m, rho, f);
    const auto g = permute(f, l, k);
    const double e_g = expectation(m, rho, g);
    if (std::abs(e_f - e_g) > tol) {
        return PermutationWitness{f, l, k, e_f, e_g};
    }
    return std::nullopt;
}

} // namespace

PermutationCheck check_permutation_invariance(const Operator &m, const DensityMatrix &rho,
                                              std::size_t trials, std::uint64_t seed) {
    if (m.dim() != rho.dim()) {
        throw DimensionMismatch("check_permutation_invariance: dimensions differ");
    }
    unsigned n = 0;
    while ((std::size_t{1} << n) < m.dim()) ++n;
    const std::size_t size = m.dim();
    const double tol = tolerance_for(m, rho);

    PermutationCheck out;
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution coin(0.5);
    std::uniform_int_distribution<std::size_t> index(0, size - 1);
    for (std::size_t t = 0; t < trials; ++t) {
        auto f = BoolFunc::from_predicate(n, [&](std::size_t) { return coin(rng); });
        // A transposition of two equal values is the identity; force f(l) != f(m).
        const std::size_t l = index(rng);
        std::size_t k = index(rng);
        while (k == l) k = index(rng);
        if (f(l) == f(k)) {
            const auto base = f;
            f = BoolFunc::from_predicate(n, [&](std::size_t j) { return j == l ? !base(l) : base(j); });
        }
        ++out.trials_run;
        if (auto w = test_transposition(m, rho, f, l, k, tol)) {
            out.invariant = false;
            out.witness = std::move(w);
            return out;
        }
    }
    return out;
}

PermutationCheck find_permutation_violation(const Operator &m, const DensityMatrix &rho) {
    if (m.dim() != rho.dim()) {
        throw DimensionMismatch("find_permutation_violation: dimensions differ");
    }
    if (m.dim() > 8) {
        throw Infeasible("exhaustive permutation search is limited to n <= 3");
    }
    unsigned n = 0;
    while ((std::size_t{1} << n) < m.dim()) ++n;
    const std::size_t size = m.dim();
    const double tol = tolerance_for(m, rho);
    PermutationCheck out;
    for (std::uint64_t t = 0; t < (std::uint64_t{1} << size); ++t) {
        const auto f = BoolFunc::from_predicate(n, [t](std::size_t j) { return (t >> j) & 1U; });
        for (std::size_t l = 0; l < size; ++l) {
            for (std::size_t k = l + 1; k < size; ++k) {
                if (f(l) == f(k)) continue;
                ++out.trials_run;
                if (auto w = test_transposition(m, rho, f, l, k, tol)) {
                    out.invariant = false;
                    out.witness = std::move(w);
                    return out;
                }
            }
        }
    }
    return out;
}

ConditionReport necessary_conditions(const Operator &m, const Operator &reference, double tol) {
    if (m.dim() != reference.dim()) {
        throw DimensionMismatch("necessary_conditions: dimensions differ");
    }
    if (!m.is_hermitian() || !reference.is_hermitian()) {
        throw NotHermitian("necessary_conditions requires hermitian operators");
    }
    ConditionReport report;
    const auto d = static_cast<Eigen::Index>(m.dim());
    bool all = true;
    for (double lambda : eig_multiset(reference).values) {
        const Matrix shifted = m.matrix() - lambda * Matrix::Identity(d, d);
        const double det = std::abs(shifted.partialPivLu().determinant());
        const bool ok = det <= tol;
        all = all && ok;
        report.eigen.push_back({lambda, det, ok});
    }
    report.trace_m = m.trace().real();
    report.trace_reference = reference.trace().real();
    report.trace_ok = std::abs(report.trace_m - report.trace_reference) <= tol;
    report.pass = all && report.trace_ok;
    return report;
}

// ---------------------------------------------------------------------------
// Search for the largest |c| / Lambda(M).

namespace {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// theta = [c, d_0..d_{N-1}, a_01, a_02, ...]. D is centred and shifted by
// -c/N, which pins Tr M = c + sum D = 0 exactly.
class IsospectralProblem {
public:
    explicit IsospectralProblem(unsigned n)
        : n_(n), dim_(std::size_t{1} << n), params_(1 + dim_ + upper_count(dim_)) {
        const auto spec = eig_multiset(total_spin(n, Axis::X)).values;
        target_ = Eigen::Map<const Vec>(spec.data(), static_cast<Eigen::Index>(spec.size()));
    }

    std::size_t params() const { return params_; }
    std::size_t dim() const { return dim_; }
    unsigned n() const { return n_; }

    InvariantForm form(const Vec &theta) const {
        InvariantForm f;
        const double nd = static_cast<double>(dim_);
        f.c = theta(0);
        const Vec raw = theta.segment(1, static_cast<Eigen::Index>(dim_));
        f.d = raw.array() - raw.mean() - f.c / nd;
        f.a_upper.assign(theta.data() + 1 + dim_, theta.data() + params_);
        return f;
    }

    struct Eval {
        Vec residual;
        Mat jacobian; // dim x params
    };

    Eval evaluate(const Vec &theta) const {
        const Matrix m = reconstruct(form(theta)).matrix();
        Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
        const auto &vals = solver.eigenvalues();
        const auto &vecs = solver.eigenvectors();
        const auto d = static_cast<Eigen::Index>(dim_);
        const double nd = static_cast<double>(dim_);
        Eval e;
        e.residual = vals - target_;
        e.jacobian.resize(d, static_cast<Eigen::Index>(params_));
        for (Eigen::Index k = 0; k < d; ++k) {
            const auto v = vecs.col(k);
            // d/dc acts through (J - 1)/N; d/dd_j through e_j e_j^T - 1/N
            // after the centring projection.
            e.jacobian(k, 0) = (std::norm(v.sum()) - 1.0) / nd;
            for (Eigen::Index j = 0; j < d; ++j) {
                e.jacobian(k, 1 + j) = std::norm(v(j)) - 1.0 / nd;
            }
            Eigen::Index col = 1 + d;
            for (Eigen::Index j = 0; j < d; ++j) {
                for (Eigen::Index l = j + 1; l < d; ++l, ++col) {
                    e.jacobian(k, col) = -2.0 * (std::conj(v(j)) * v(l)).imag();
                }
            }
        }
        return e;
    }

private:
    unsigned n_;
    std::size_t dim_;
    std::size_t params_;
    Vec target_;
};

struct Budget {
    std::size_t left;
    bool take() {
        if (left == 0) return false;
        --left;
        return true;
    }
};

// Minimizes |r|^2 - (mu / n) c with BFGS and Armijo backtracking.
Vec penalty_descent(const IsospectralProblem &prob, Vec x, double mu, Budget &budget) {
    const auto p = static_cast<Eigen::Index>(prob.params());
    const double tilt = mu / prob.n();
    auto value_grad = [&](const Vec &theta, Vec &grad) {
        const auto e = prob.evaluate(theta);
        grad = 2.0 * e.jacobian.transpose() * e.residual;
        grad(0) -= tilt;
        return e.residual.squaredNorm() - tilt * theta(0);
    };

    if (!budget.take()) return x;
    Vec g;
    double fx = value_grad(x, g);
    Mat h = Mat::Identity(p, p);
    for (int iter = 0; iter < 500; ++iter) {
        if (g.norm() < 1e-14) break;
        Vec dir = -h * g;
        double slope = g.dot(dir);
        if (slope >= 0.0) {
            h.setIdentity();
            dir = -g;
            slope = -g.squaredNorm();
        }
        double step = 1.0;
        Vec xn;
        Vec gn;
        double fn = 0.0;
        bool accepted = false;
        for (int ls = 0; ls < 40; ++ls) {
            if (!budget.take()) return x;
            xn = x + step * dir;
            fn = value_grad(xn, gn);
            if (fn <= fx + 1e-4 * step * slope) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;
        const Vec s = xn - x;
        const Vec y = gn - g;
        const double sy = s.dot(y);
        if (sy > 1e-16 * s.norm() * y.norm()) {
            const double rho = 1.0 / sy;
            const Mat i_rsy = Mat::Identity(p, p) - rho * s * y.transpose();
            h = i_rsy * h * i_rsy.transpose() + rho * s * s.transpose();
        }
        const double improvement = fx - fn;
        x = std::move(xn);
        g = std::move(gn);
        fx = fn;
        if (improvement < 1e-18) break;
    }
    return x;
}

// Levenberg-Marquardt on the eigenvalue residual with c held fixed.
// Returns the max-abs residual reached.
double polish_fixed_c(const IsospectralProblem &prob, Vec &x, double target, Budget &budget) {
    const auto p = static_cast<Eigen::Index>(prob.params());
    if (!budget.take()) return std::numeric_limits<double>::infinity();
    auto e = prob.evaluate(x);
    double cost = e.residual.squaredNorm();
    double nu = 1e-3;
    int stalls = 0;
    for (int iter = 0; iter < 200; ++iter) {
        if (e.residual.cwiseAbs().maxCoeff() <= target) break;
        const Mat j = e.jacobian.rightCols(p - 1);
        const Mat jtj = j.transpose() * j;
        const Vec rhs = -j.transpose() * e.residual;
        Mat lhs = jtj;
        lhs.diagonal().array() += nu * (1.0 + jtj.diagonal().array());
        const Vec delta = lhs.ldlt().solve(rhs);
        Vec xn = x;
        xn.tail(p - 1) += delta;
        if (!budget.take()) break;
        auto en = prob.evaluate(xn);
        const double cn = en.residual.squaredNorm();
        if (cn < cost) {
            stalls = cn > 0.999 * cost ? stalls + 1 : 0;
            x = std::move(xn);
            e = std::move(en);
            cost = cn;
            nu = std::max(nu / 3.0, 1e-12);
        } else {
            nu *= 4.0;
            ++stalls;
        }
        if (nu > 1e12 || stalls > 12) break;
    }
    return e.residual.cwiseAbs().maxCoeff();
}

struct RestartOutcome {
    Vec theta;
    double residual = std::numeric_limits<double>::infinity();
    std::size_t used = 0;
};

RestartOutcome run_restart(const IsospectralProblem &prob, const SearchOptions &opt,
                           std::size_t restart, std::size_t allowance) {
    std::seed_seq seq{static_cast<std::uint32_t>(opt.seed), static_cast<std::uint32_t>(opt.seed >> 32),
                      static_cast<std::uint32_t>(restart)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> gauss(0.0, 0.5);
    std::uniform_real_distribution<double> uni(0.2, 1.0);

    const auto p = static_cast<Eigen::Index>(prob.params());
    Vec x(p);
    x(0) = uni(rng) * prob.n();
    for (Eigen::Index i = 1; i < p; ++i) x(i) = gauss(rng);

    Budget budget{allowance};
    const std::size_t penalty_share = allowance * 3 / 4;
    constexpr int kStages = 8;
    double mu = 1e-1;
    for (int s = 0; s < kStages; ++s, mu *= 0.1) {
        Budget stage{std::min(budget.left, penalty_share / kStages)};
        const std::size_t before = stage.left;
        x = penalty_descent(prob, std::move(x), mu, stage);
        budget.left -= before - stage.left;
    }
    if (x(0) < 0.0) {
        // -M is isospectral with F_x whenever M is, and has c -> -c.
        x = -x;
    }

    // The largest c sits where the Jacobian drops rank, so LM near it crawls
    // and rarely reaches polish_tol. Back-off and bisection accept anything
    // a decade inside the feasibility tolerance; the polish still aims lower.
    const double accept = std::max(opt.polish_tol, 0.1 * opt.feasibility_tol);
    RestartOutcome out;
    Vec trial = x;
    double res = polish_fixed_c(prob, trial, opt.polish_tol, budget);
    out.theta = trial;
    out.residual = res;
    if (res > accept) {
        double hi = x(0);
        double lo = hi;
        double step = 1e-6 * prob.n();
        bool found = false;
        for (int i = 0; i < 24 && budget.left > 0; ++i) {
            lo = hi - step;
            trial = x;
            trial(0) = lo;
            res = polish_fixed_c(prob, trial, opt.polish_tol, budget);
            if (res <= accept || res < out.residual) {
                out.theta = trial;
                out.residual = res;
            }
            if (res <= accept) {
                found = true;
                break;
            }
            hi = lo;
            step *= 4.0;
        }
        for (int i = 0; found && i < 40 && hi - lo > 1e-10 * prob.n() && budget.left > 0; ++i) {
            const double mid = 0.5 * (lo + hi);
            trial = out.theta;
            trial(0) = mid;
            res = polish_fixed_c(prob, trial, opt.polish_tol, budget);
            if (res <= accept) {
                lo = mid;
                out.theta = trial;
                out.residual = res;
            } else {
                hi = mid;
            }
        }
    }
    out.used = allowance - budget.left;
    return out;
}

} // namespace

SearchResult search_max_c_ratio(unsigned n, const SearchOptions &options) {
    if (n == 0 || n > kMaxDenseSpins) {
        throw Infeasible("search needs 1 <= n <= " + std::to_string(kMaxDenseSpins));
    }
    if (options.budget == 0 || options.restarts == 0) {
        throw Error("search needs a positive budget and at least one restart");
    }
    const IsospectralProblem prob(n);
    const std::size_t restarts = options.restarts;
    const std::size_t allowance = std::max<std::size_t>(1, options.budget / restarts);

    std::vector<RestartOutcome> outcomes(restarts);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t r = next++; r < restarts; r = next++) {
            outcomes[r] = run_restart(prob, options, r, allowance);
        }
    };
    unsigned threads = options.threads != 0 ? options.threads : std::thread::hardware_concurrency();
    threads = std::clamp<unsigned>(threads, 1, static_cast<unsigned>(restarts));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto &t : pool) t.join();

    SearchResult result;
    result.n = n;
    result.budget = options.budget;
    result.seed = options.seed;
    std::optional<std::size_t> best_feasible;
    std::size_t least_violation = 0;
    for (std::size_t r = 0; r < restarts; ++r) {
        const auto &o = outcomes[r];
        result.evaluations += o.used;
        if (o.residual < outcomes[least_violation].residual) least_violation = r;
        if (o.residual <= options.feasibility_tol &&
            (!best_feasible || std::abs(o.theta(0)) > std::abs(outcomes[*best_feasible].theta(0)))) {
            best_feasible = r;
        }
    }
    const std::size_t pick = best_feasible.value_or(least_violation);
    const auto &chosen = outcomes[pick];
    result.best_restart = pick;
    result.feasible = best_feasible.has_value();
    result.residual = chosen.residual;
    result.best = prob.form(chosen.theta);
    result.ratio = std::abs(result.best.c) / spectral_range(reconstruct(result.best));
    return result;
}

SearchResult search_max_c_ratio(unsigned n, std::size_t budget, std::uint64_t seed) {
    SearchOptions options;
    options.budget = budget;
    options.seed = seed;
    return search_max_c_ratio(n, options);
}

} // namespace evqc
