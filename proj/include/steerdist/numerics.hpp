#pragma once

// Small dense complex linear algebra (dimension <= 8): everything the
// steering toolkit needs for 1-3 qubit operators without pulling in a
// general-purpose numerics package.

#include <array>
#include <complex>
#include <initializer_list>
#include <span>
#include <vector>

namespace steerdist {

using Complex = std::complex<double>;

inline constexpr int kMaxDim = 8;

/// Square complex matrix stored inline, row-major.
class Matrix {
public:
    Matrix() = default;
    explicit Matrix(int dim);

    static Matrix identity(int dim);
    static Matrix diagonal(std::span<const double> diag);
    static Matrix diagonal(std::initializer_list<double> diag);
    /// |ket><ket| scaled by weight.
    static Matrix outer(std::span<const Complex> ket, double weight = 1.0);

    int dim() const noexcept { return dim_; }

    Complex& operator()(int row, int col) { return data_[row * dim_ + col]; }
    const Complex& operator()(int row, int col) const { return data_[row * dim_ + col]; }

    Matrix adjoint() const;
    Complex trace() const;
    double max_abs() const;
    double max_abs_diff(const Matrix& other) const;
    bool is_hermitian(double tol) const;
    bool all_finite() const;

    Matrix& operator+=(const Matrix& other);
    Matrix& operator-=(const Matrix& other);
    Matrix& operator*=(Complex scale);

    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator*(Matrix a, Complex s) { return a *= s; }
    friend Matrix operator*(Complex s, Matrix a) { return a *= s; }
    friend Matrix operator*(const Matrix& a, const Matrix& b);

private:
    int dim_ = 0;
    std::array<Complex, kMaxDim * kMaxDim> data_{};
};

/// A Matrix known to be Hermitian (checked entrywise within tol::herm on
/// construction, then symmetrized exactly). Dimension is 2, 4 or 8.
///
/// `psd_hint()` is only true when positivity was either verified by an
/// eigendecomposition or follows from the construction (projectors, square
/// roots, congruences of PSD matrices).
class HermitianMatrix {
public:
    HermitianMatrix() = default;
    explicit HermitianMatrix(const Matrix& m, bool psd_hint = false);

    static HermitianMatrix zero(int dim);
    static HermitianMatrix identity(int dim);
    static HermitianMatrix diagonal(std::initializer_list<double> diag);
    /// weight * |ket><ket|, PSD for weight >= 0.
    static HermitianMatrix projector(std::span<const Complex> ket, double weight = 1.0);
    /// Verifies all eigenvalues >= -tol::psd; throws NotPsd otherwise.
    static HermitianMatrix checked_psd(const Matrix& m);

    int dim() const noexcept { return m_.dim(); }
    const Matrix& matrix() const noexcept { return m_; }
    Complex operator()(int row, int col) const { return m_(row, col); }
    double trace() const { return m_.trace().real(); }
    bool psd_hint() const noexcept { return psd_; }

    double max_abs_diff(const HermitianMatrix& other) const { return m_.max_abs_diff(other.m_); }

    /// Congruence op * this * op^dagger; PSD is preserved.
    HermitianMatrix congruence(const Matrix& op) const;

    HermitianMatrix& operator+=(const HermitianMatrix& other);
    HermitianMatrix& operator*=(double scale);
    friend HermitianMatrix operator+(HermitianMatrix a, const HermitianMatrix& b) { return a += b; }
    friend HermitianMatrix operator*(HermitianMatrix a, double s) { return a *= s; }
    friend HermitianMatrix operator*(double s, HermitianMatrix a) { return a *= s; }
    friend HermitianMatrix operator-(const HermitianMatrix& a, const HermitianMatrix& b);

private:
    Matrix m_;
    bool psd_ = false;
};

struct EigenDecomposition {
    std::vector<double> values;  // ascending
    Matrix vectors;              // eigenvectors as columns
};

/// Cyclic complex Jacobi. Throws NoConvergence after tol::max_jacobi_sweeps.
EigenDecomposition eig_hermitian(const HermitianMatrix& m);

/// Principal square root of a PSD matrix. Eigenvalues in [-tol::psd, 0) and
/// positive values below tol::relative_rank * lambda_max are treated as 0.
HermitianMatrix psd_sqrt(const HermitianMatrix& m);

Matrix kron(const Matrix& a, const Matrix& b);
HermitianMatrix kron(const HermitianMatrix& a, const HermitianMatrix& b);

/// Qubit subsystem mask for partial_trace: bit q selects the q-th tensor
/// factor counted from the left (bit 0 = first/most significant qubit).
using QubitMask = unsigned;

/// Traces out every qubit not selected in `keep`.
Matrix partial_trace(const Matrix& m, QubitMask keep);
HermitianMatrix partial_trace(const HermitianMatrix& m, QubitMask keep);

}  // namespace steerdist
