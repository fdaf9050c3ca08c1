#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace chaintx {

using cplx = std::complex<double>;
using ComplexVector = std::vector<cplx>;

/// Dense row-major matrix. Comparisons take an explicit absolute tolerance.
template <typename T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<const T> data() const { return data_; }

    std::vector<T> column(std::size_t j) const {
        std::vector<T> c(rows_);
        for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
        return c;
    }
    void set_column(std::size_t j, std::span<const T> c) {
        for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = c[i];
    }

    bool operator==(const Matrix&) const = delete;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using ComplexMatrix = Matrix<cplx>;
using RealMatrix = Matrix<double>;

ComplexMatrix to_complex(const RealMatrix& m);
ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexVector multiply(const ComplexMatrix& a, std::span<const cplx> x);
ComplexMatrix adjoint(const ComplexMatrix& a);
ComplexMatrix scaled(const ComplexMatrix& a, cplx s);
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);
bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b, double abs_tol);
/// max_ij |(A^H A - I)_ij|
double unitarity_defect(const ComplexMatrix& a);

cplx dot(std::span<const cplx> a, std::span<const cplx> b); // conj(a) . b
double norm(std::span<const cplx> v);

/// Real symmetric tridiagonal matrix: diag has length N, offdiag N-1.
struct SymTridiag {
    std::vector<double> diag;
    std::vector<double> offdiag;

    std::size_t size() const { return diag.size(); }
    RealMatrix dense() const;
};

/// values ascending; vectors(j, m) is the component of eigenvector m on basis state j.
struct EigenSystem {
    std::vector<double> values;
    RealMatrix vectors;
};

/// Eigensystem of a unitary matrix: unit-modulus values, orthonormal columns,
/// ordered by eigenphase in (-pi, pi].
struct UnitaryEigenSystem {
    std::vector<cplx> values;
    ComplexMatrix vectors;

    std::size_t size() const { return values.size(); }
    ComplexVector vector(std::size_t m) const { return vectors.column(m); }
    double phase(std::size_t m) const { return std::arg(values[m]); }
};

struct HermitianEigenSystem {
    std::vector<double> values;
    ComplexMatrix vectors;
};

inline constexpr int kMaxQlIterations = 50;
inline constexpr double kDefaultDegeneracyTol = 1e-8;
inline constexpr double kUnitarityTol = 1e-8;

/// Implicit-shift QL. Throws NumericalError past kMaxQlIterations sweeps on one eigenvalue.
EigenSystem eig_sym_tridiag(const SymTridiag& m);

/// Householder reduction to real tridiagonal form followed by the same QL iteration.
HermitianEigenSystem eig_hermitian(const ComplexMatrix& a);

/// Spectral decomposition of a unitary matrix through its commuting Hermitian
/// parts: diagonalize (W + W^H)/2, then split each cluster of that spectrum
/// (consecutive gaps <= degeneracy_tol) with the restriction of (W - W^H)/2i.
UnitaryEigenSystem eig_unitary(const ComplexMatrix& w, double degeneracy_tol = kDefaultDegeneracyTol);

/// e^{-i phi} v with the largest-magnitude component real and positive.
/// Components within a relative 1e-9 of the maximum tie; the lowest index wins.
ComplexVector phase_fix(std::span<const cplx> v);

} // namespace chaintx
