#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "evqc/funcspace.hpp"

namespace evqc {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

// Dense storage tops out at N = 4096.
inline constexpr unsigned kMaxDenseSpins = 12;

// Entrywise tolerance (relative to the largest entry) for the hermitian and
// unitary structure flags.
inline constexpr double kStructureTol = 1e-10;

enum class Axis { X, Y, Z };

/// Dense N x N complex operator. The hermitian and diagonal flags are
/// computed once at construction and never go stale because the matrix is
/// not mutable through the public interface.
class Operator {
public:
    explicit Operator(Matrix m);

    static Operator identity(std::size_t dim);
    static Operator diagonal(const Eigen::VectorXcd &diag);

    std::size_t dim() const noexcept { return static_cast<std::size_t>(m_.rows()); }
    const Matrix &matrix() const noexcept { return m_; }
    Complex operator()(std::size_t row, std::size_t col) const { return m_(row, col); }

    bool is_hermitian() const noexcept { return hermitian_; }
    bool is_diagonal() const noexcept { return diagonal_; }
    /// Not cached: dense operators need an O(N^3) product to decide this.
    bool is_unitary(double tol = kStructureTol) const;

    Complex trace() const { return m_.trace(); }
    Operator adjoint() const { return Operator(m_.adjoint()); }

    friend Operator operator+(const Operator &a, const Operator &b);
    friend Operator operator-(const Operator &a, const Operator &b);
    friend Operator operator*(const Operator &a, const Operator &b);
    friend Operator operator*(Complex s, const Operator &a);

private:
    Matrix m_;
    bool hermitian_ = false;
    bool diagonal_ = false;
};

/// Sorted (ascending) eigenvalues of a hermitian operator, with multiplicity.
struct EigenSpectrum {
    std::vector<double> values;

    double min() const { return values.front(); }
    double max() const { return values.back(); }
    double sum() const;
};

/// I^i_axis on n spins. Spin 1 is the leftmost tensor factor, i.e. the most
/// significant bit of the computational index.
Operator single_spin(unsigned n, unsigned i, Axis axis);

/// F_axis = sum_i I^i_axis.
Operator total_spin(unsigned n, Axis axis);

/// |w><w| with |w> the uniform superposition; every entry equals 1/N.
Operator w_projector(unsigned n);

/// Diagonal phase oracle U_f |j> = (-1)^f(j) |j>.
Operator oracle(const BoolFunc &f);

/// Largest minus smallest eigenvalue. Throws NotHermitian.
double spectral_range(const Operator &m);

/// Throws NotHermitian.
EigenSpectrum eig_multiset(const Operator &m);

/// Default multiset tolerance 1e-9 * N.
double default_spectrum_tol(std::size_t dim) noexcept;

/// For hermitian operators, equal sorted spectra is necessary and sufficient.
bool unitarily_equivalent(const Operator &a, const Operator &b, double tol);
bool unitarily_equivalent(const Operator &a, const Operator &b);

// Debug/golden dump:
//   dim=<N>
//   <re>,<im>      (N*N lines, row-major, 17 significant digits)
void write_operator_dump(std::ostream &os, const Operator &m);
std::string operator_dump(const Operator &m);
Operator read_operator_dump(std::istream &is);

} // namespace evqc
