#include "evqc/spinops.hpp"

#include <algorithm>
#include <bit>
#include <iomanip>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "evqc/error.hpp"

namespace evqc {

namespace {

double entry_scale(const Matrix &m) {
    return m.size() == 0 ? 1.0 : std::max(1.0, m.cwiseAbs().maxCoeff());
}

std::size_t dense_dim(unsigned n) {
    if (n == 0 || n > kMaxDenseSpins) {
        throw Infeasible("spin count must be in [1, " + std::to_string(kMaxDenseSpins) +
                         "] for dense operators, got " + std::to_string(n));
    }
    return std::size_t{1} << n;
}

void require_hermitian(const Operator &m, const char *what) {
    if (!m.is_hermitian()) {
        throw NotHermitian(std::string(what) + " requires a hermitian operator");
    }
}

void require_same_dim(const Operator &a, const Operator &b) {
    if (a.dim() != b.dim()) {
        throw DimensionMismatch("operator dimensions differ: " + std::to_string(a.dim()) + " vs " +
                                std::to_string(b.dim()));
    }
}

} // namespace

Operator::Operator(Matrix m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols() || m_.rows() == 0) {
        throw DimensionMismatch("operator must be a non-empty square matrix");
    }
    const double tol = kStructureTol * entry_scale(m_);
    hermitian_ = (m_ - m_.adjoint()).cwiseAbs().maxCoeff() <= tol;
    Matrix off = m_;
    off.diagonal().setZero();
    diagonal_ = off.cwiseAbs().maxCoeff() <= tol;
}

Operator Operator::identity(std::size_t dim) {
    const auto d = static_cast<Eigen::Index>(dim);
    return Operator(Matrix::Identity(d, d));
}

Operator Operator::diagonal(const Eigen::VectorXcd &diag) {
    return Operator(Matrix(diag.asDiagonal()));
}

bool Operator::is_unitary(double tol) const {
    const auto d = m_.rows();
    if (diagonal_) {
        return (m_.diagonal().cwiseAbs().array() - 1.0).abs().maxCoeff() <= tol;
    }
    return (m_ * m_.adjoint() - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() <= tol;
}

Operator operator+(const Operator &a, const Operator &b) {
    require_same_dim(a, b);
    return Operator(a.m_ + b.m_);
}

Operator operator-(const Operator &a, const Operator &b) {
    require_same_dim(a, b);
    return Operator(a.m_ - b.m_);
}

Operator operator*(const Operator &a, const Operator &b) {
    require_same_dim(a, b);
    if (a.diagonal_) {
        return Operator(a.m_.diagonal().asDiagonal() * b.m_);
    }
    if (b.diagonal_) {
        return Operator(a.m_ * b.m_.diagonal().asDiagonal());
    }
    return Operator(a.m_ * b.m_);
}

Operator operator*(Complex s, const Operator &a) {
    return Operator(s * a.m_);
}

double EigenSpectrum::sum() const {
    return std::accumulate(values.begin(), values.end(), 0.0);
}

Operator single_spin(unsigned n, unsigned i, Axis axis) {
    const std::size_t dim = dense_dim(n);
    if (i < 1 || i > n) {
        throw IndexOutOfRange("spin index " + std::to_string(i) + " outside 1.." + std::to_string(n));
    }
    const std::size_t mask = std::size_t{1} << (n - i);
    const auto d = static_cast<Eigen::Index>(dim);
    Matrix m = Matrix::Zero(d, d);
    for (std::size_t l = 0; l < dim; ++l) {
        const bool up = (l & mask) == 0;
        const auto row = static_cast<Eigen::Index>(l);
        const auto col = static_cast<Eigen::Index>(l ^ mask);
        switch (axis) {
        case Axis::X: m(row, col) = 0.5; break;
        case Axis::Y: m(row, col) = up ? Complex(0.0, -0.5) : Complex(0.0, 0.5); break;
        case Axis::Z: m(row, row) = up ? 0.5 : -0.5; break;
        }
    }
    return Operator(std::move(m));
}

Operator total_spin(unsigned n, Axis axis) {
    const std::size_t dim = dense_dim(n);
    const auto d = static_cast<Eigen::Index>(dim);
    Matrix m = Matrix::Zero(d, d);
    for (std::size_t l = 0; l < dim; ++l) {
        const auto row = static_cast<Eigen::Index>(l);
        for (unsigned b = 0; b < n; ++b) {
            const std::size_t mask = std::size_t{1} << b;
            const bool up = (l & mask) == 0;
            const auto col = static_cast<Eigen::Index>(l ^ mask);
            switch (axis) {
            case Axis::X: m(row, col) += 0.5; break;
            case Axis::Y: m(row, col) += up ? Complex(0.0, -0.5) : Complex(0.0, 0.5); break;
            case Axis::Z: m(row, row) += up ? 0.5 : -0.5; break;
            }
        }
    }
    return Operator(std::move(m));
}

Operator w_projector(unsigned n) {
    const auto d = static_cast<Eigen::Index>(dense_dim(n));
    return Operator(Matrix::Constant(d, d, Complex(1.0 / static_cast<double>(d), 0.0)));
}

Operator oracle(const BoolFunc &f) {
    dense_dim(f.bits());
    Eigen::VectorXcd diag(static_cast<Eigen::Index>(f.size()));
    for (std::size_t j = 0; j < f.size(); ++j) {
        diag(static_cast<Eigen::Index>(j)) = static_cast<double>(f.sign(j));
    }
    return Operator::diagonal(diag);
}

EigenSpectrum eig_multiset(const Operator &m) {
    require_hermitian(m, "eig_multiset");
    EigenSpectrum out;
    if (m.is_diagonal()) {
        const Eigen::VectorXd diag = m.matrix().diagonal().real();
        out.values.assign(diag.data(), diag.data() + diag.size());
        std::sort(out.values.begin(), out.values.end());
        return out;
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m.matrix(), Eigen::EigenvaluesOnly);
    const auto &ev = solver.eigenvalues();
    out.values.assign(ev.data(), ev.data() + ev.size());
    std::sort(out.values.begin(), out.values.end());
    return out;
}

double spectral_range(const Operator &m) {
    const auto spec = eig_multiset(m);
    return std::max(0.0, spec.max() - spec.min());
}

double default_spectrum_tol(std::size_t dim) noexcept {
    return 1e-9 * static_cast<double>(dim);
}

bool unitarily_equivalent(const Operator &a, const Operator &b, double tol) {
    require_same_dim(a, b);
    const auto sa = eig_multiset(a);
    const auto sb = eig_multiset(b);
    for (std::size_t k = 0; k < sa.values.size(); ++k) {
        if (std::abs(sa.values[k] - sb.values[k]) > tol) return false;
    }
    return true;
}

bool unitarily_equivalent(const Operator &a, const Operator &b) {
    return unitarily_equivalent(a, b, default_spectrum_tol(a.dim()));
}

void write_operator_dump(std::ostream &os, const Operator &m) {
    const auto flags = os.flags();
    const auto prec = os.precision();
    os << "dim=" << m.dim() << '\n' << std::setprecision(17);
    const auto &mat = m.matrix();
    for (Eigen::Index r = 0; r < mat.rows(); ++r) {
        for (Eigen::Index c = 0; c < mat.cols(); ++c) {
            os << mat(r, c).real() << ',' << mat(r, c).imag() << '\n';
        }
    }
    os.flags(flags);
    os.precision(prec);
}

std::string operator_dump(const Operator &m) {
    std::ostringstream os;
    write_operator_dump(os, m);
    return os.str();
}

Operator read_operator_dump(std::istream &is) {
    std::string line;
    if (!std::getline(is, line) || !line.starts_with("dim=")) {
        throw ParseError("operator dump must start with 'dim=<N>'");
    }
    std::size_t dim = 0;
    try {
        dim = std::stoul(line.substr(4));
    } catch (const std::exception &) {
        throw ParseError("malformed operator dimension '" + line + "'");
    }
    if (dim == 0 || dim > (std::size_t{1} << kMaxDenseSpins)) {
        throw ParseError("operator dimension out of range");
    }
    const auto d = static_cast<Eigen::Index>(dim);
    Matrix m(d, d);
    for (Eigen::Index r = 0; r < d; ++r) {
        for (Eigen::Index c = 0; c < d; ++c) {
            if (!std::getline(is, line)) {
                throw ParseError("operator dump truncated");
            }
            const auto comma = line.find(',');
            if (comma == std::string::npos) {
                throw ParseError("expected 're,im' pair, got '" + line + "'");
            }
            try {
                m(r, c) = Complex(std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1)));
            } catch (const std::exception &) {
                throw ParseError("malformed number in '" + line + "'");
            }
        }
    }
    return Operator(std::move(m));
}

} // namespace evqc
