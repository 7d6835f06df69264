#include "steerdist/numerics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>

#include "steerdist/errors.hpp"
#include "steerdist/tolerances.hpp"

namespace steerdist {

namespace {

void require_dim(int dim) {
    if (dim < 1 || dim > kMaxDim) {
        throw Error(ErrorCode::BadDimension, "matrix dimension " + std::to_string(dim));
    }
}

void require_same_dim(const Matrix& a, const Matrix& b) {
    if (a.dim() != b.dim()) {
        throw Error(ErrorCode::DimMismatch,
                    std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
    }
}

int qubit_count(int dim) {
    if (dim < 2 || !std::has_single_bit(static_cast<unsigned>(dim))) {
        return -1;
    }
    return std::countr_zero(static_cast<unsigned>(dim));
}

}  // namespace

std::string_view error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::NotHermitian: return "NotHermitian";
        case ErrorCode::NotPsd: return "NotPSD";
        case ErrorCode::NonFinite: return "NonFinite";
        case ErrorCode::NoConvergence: return "NoConvergence";
        case ErrorCode::BadDimension: return "BadDimension";
        case ErrorCode::DimOverflow: return "DimOverflow";
        case ErrorCode::DimMismatch: return "DimMismatch";
        case ErrorCode::BadMask: return "BadMask";
        case ErrorCode::ThetaOutOfRange: return "ThetaOutOfRange";
        case ErrorCode::KappaOutOfRange: return "KappaOutOfRange";
        case ErrorCode::CopiesOutOfRange: return "CopiesOutOfRange";
        case ErrorCode::TrialsOutOfRange: return "TrialsOutOfRange";
        case ErrorCode::ZeroSuccessProbability: return "ZeroSuccessProbability";
        case ErrorCode::ScenarioMismatch: return "ScenarioMismatch";
        case ErrorCode::InvariantViolation: return "InvariantViolation";
        case ErrorCode::NonFiniteObjective: return "NonFiniteObjective";
        case ErrorCode::NoSignChange: return "NoSignChange";
        case ErrorCode::Parse: return "Parse";
    }
    return "Unknown";
}

// ---------------------------------------------------------------------------
// Matrix

Matrix::Matrix(int dim) : dim_(dim) { require_dim(dim); }

Matrix Matrix::identity(int dim) {
    Matrix m(dim);
    for (int i = 0; i < dim; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

Matrix Matrix::diagonal(std::span<const double> diag) {
    Matrix m(static_cast<int>(diag.size()));
    for (int i = 0; i < m.dim(); ++i) {
        m(i, i) = diag[i];
    }
    return m;
}

Matrix Matrix::diagonal(std::initializer_list<double> diag) {
    return diagonal(std::span<const double>(diag.begin(), diag.size()));
}

Matrix Matrix::outer(std::span<const Complex> ket, double weight) {
    Matrix m(static_cast<int>(ket.size()));
    for (int i = 0; i < m.dim(); ++i) {
        for (int j = 0; j < m.dim(); ++j) {
            m(i, j) = weight * ket[i] * std::conj(ket[j]);
        }
    }
    return m;
}

Matrix Matrix::adjoint() const {
    Matrix r(dim_);
    for (int i = 0; i < dim_; ++i) {
        for (int j = 0; j < dim_; ++j) {
            r(i, j) = std::conj((*this)(j, i));
        }
    }
    return r;
}

Complex Matrix::trace() const {
    Complex t = 0.0;
    for (int i = 0; i < dim_; ++i) {
        t += (*this)(i, i);
    }
    return t;
}

double Matrix::max_abs() const {
    double best = 0.0;
    for (int k = 0; k < dim_ * dim_; ++k) {
        best = std::max(best, std::abs(data_[k]));
    }
    return best;
}

double Matrix::max_abs_diff(const Matrix& other) const {
    require_same_dim(*this, other);
    double best = 0.0;
    for (int k = 0; k < dim_ * dim_; ++k) {
        best = std::max(best, std::abs(data_[k] - other.data_[k]));
    }
    return best;
}

bool Matrix::is_hermitian(double tol) const {
    for (int i = 0; i < dim_; ++i) {
        for (int j = i; j < dim_; ++j) {
            if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > tol) {
                return false;
            }
        }
    }
    return true;
}

bool Matrix::all_finite() const {
    return std::all_of(data_.begin(), data_.begin() + dim_ * dim_, [](const Complex& z) {
        return std::isfinite(z.real()) && std::isfinite(z.imag());
    });
}

Matrix& Matrix::operator+=(const Matrix& other) {
    require_same_dim(*this, other);
    for (int k = 0; k < dim_ * dim_; ++k) {
        data_[k] += other.data_[k];
    }
    return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
    require_same_dim(*this, other);
    for (int k = 0; k < dim_ * dim_; ++k) {
        data_[k] -= other.data_[k];
    }
    return *this;
}

Matrix& Matrix::operator*=(Complex scale) {
    for (int k = 0; k < dim_ * dim_; ++k) {
        data_[k] *= scale;
    }
    return *this;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    require_same_dim(a, b);
    const int n = a.dim();
    Matrix r(n);
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k) {
            const Complex aik = a(i, k);
            if (aik == Complex{}) {
                continue;
            }
            for (int j = 0; j < n; ++j) {
                r(i, j) += aik * b(k, j);
            }
        }
    }
    return r;
}

// ---------------------------------------------------------------------------
// HermitianMatrix

HermitianMatrix::HermitianMatrix(const Matrix& m, bool psd_hint) : m_(m), psd_(psd_hint) {
    const int d = m.dim();
    if (d != 2 && d != 4 && d != 8) {
        throw Error(ErrorCode::BadDimension,
                    "Hermitian matrices must have dim 2, 4 or 8, got " + std::to_string(d));
    }
    if (!m.all_finite()) {
        throw Error(ErrorCode::NonFinite, "matrix has non-finite entries");
    }
    if (!m.is_hermitian(tol::herm)) {
        throw Error(ErrorCode::NotHermitian, "asymmetry exceeds tolerance");
    }
    for (int i = 0; i < d; ++i) {
        m_(i, i) = m(i, i).real();
        for (int j = i + 1; j < d; ++j) {
            const Complex avg = 0.5 * (m(i, j) + std::conj(m(j, i)));
            m_(i, j) = avg;
            m_(j, i) = std::conj(avg);
        }
    }
}

HermitianMatrix HermitianMatrix::zero(int dim) { return HermitianMatrix(Matrix(dim), true); }

HermitianMatrix HermitianMatrix::identity(int dim) {
    return HermitianMatrix(Matrix::identity(dim), true);
}

HermitianMatrix HermitianMatrix::diagonal(std::initializer_list<double> diag) {
    const bool nonneg = std::all_of(diag.begin(), diag.end(), [](double v) { return v >= 0.0; });
    return HermitianMatrix(Matrix::diagonal(diag), nonneg);
}

HermitianMatrix HermitianMatrix::projector(std::span<const Complex> ket, double weight) {
    return HermitianMatrix(Matrix::outer(ket, weight), weight >= 0.0);
}

HermitianMatrix HermitianMatrix::checked_psd(const Matrix& m) {
    HermitianMatrix h(m);
    const auto eig = eig_hermitian(h);
    if (eig.values.front() < -tol::psd) {
        throw Error(ErrorCode::NotPsd,
                    "minimum eigenvalue " + std::to_string(eig.values.front()));
    }
    h.psd_ = true;
    return h;
}

HermitianMatrix HermitianMatrix::congruence(const Matrix& op) const {
    return HermitianMatrix(op * m_ * op.adjoint(), psd_);
}

HermitianMatrix& HermitianMatrix::operator+=(const HermitianMatrix& other) {
    m_ += other.m_;
    psd_ = psd_ && other.psd_;
    return *this;
}

HermitianMatrix& HermitianMatrix::operator*=(double scale) {
    m_ *= scale;
    psd_ = psd_ && scale >= 0.0;
    return *this;
}

HermitianMatrix operator-(const HermitianMatrix& a, const HermitianMatrix& b) {
    return HermitianMatrix(a.matrix() - b.matrix());
}

// ---------------------------------------------------------------------------
// Eigendecomposition

EigenDecomposition eig_hermitian(const HermitianMatrix& h) {
    const int n = h.dim();
    Matrix a = h.matrix();
    Matrix v = Matrix::identity(n);

    auto off_norm2 = [&] {
        double s = 0.0;
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                s += std::norm(a(p, q));
            }
        }
        return s;
    };
    double fro2 = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            fro2 += std::norm(a(i, j));
        }
    }
    const double stop2 = 1e-30 * fro2;

    bool converged = false;
    for (int sweep = 0; sweep < tol::max_jacobi_sweeps; ++sweep) {
        if (off_norm2() <= stop2) {
            converged = true;
            break;
        }
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double r = std::abs(a(p, q));
                if (r == 0.0) {
                    continue;
                }
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                // Negligible relative to both diagonals: drop it.
                if (sweep > 3 && std::abs(app) + 100.0 * r == std::abs(app) &&
                    std::abs(aqq) + 100.0 * r == std::abs(aqq)) {
                    a(p, q) = 0.0;
                    a(q, p) = 0.0;
                    continue;
                }
                // U = diag-phase(q) * real rotation; makes a(p,q) real then zeroes it.
                const Complex e = a(p, q) / r;
                const double theta = (aqq - app) / (2.0 * r);
                double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                if (theta < 0.0) {
                    t = -t;
                }
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const Complex ce = std::conj(e);

                for (int k = 0; k < n; ++k) {
                    const Complex akp = a(k, p);
                    const Complex akq = a(k, q);
                    a(k, p) = c * akp - s * ce * akq;
                    a(k, q) = s * akp + c * ce * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const Complex apk = a(p, k);
                    const Complex aqk = a(q, k);
                    a(p, k) = c * apk - s * e * aqk;
                    a(q, k) = s * apk + c * e * aqk;
                }
                a(p, p) = app - t * r;
                a(q, q) = aqq + t * r;
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (int k = 0; k < n; ++k) {
                    const Complex vkp = v(k, p);
                    const Complex vkq = v(k, q);
                    v(k, p) = c * vkp - s * ce * vkq;
                    v(k, q) = s * vkp + c * ce * vkq;
                }
            }
        }
    }
    if (!converged && off_norm2() > stop2) {
        throw Error(ErrorCode::NoConvergence,
                    "Jacobi did not converge in " + std::to_string(tol::max_jacobi_sweeps) +
                        " sweeps");
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return a(i, i).real() < a(j, j).real(); });

    EigenDecomposition out{std::vector<double>(n), Matrix(n)};
    for (int k = 0; k < n; ++k) {
        out.values[k] = a(order[k], order[k]).real();
        for (int row = 0; row < n; ++row) {
            out.vectors(row, k) = v(row, order[k]);
        }
    }

#ifndef NDEBUG
    Matrix recon(n);
    for (int k = 0; k < n; ++k) {
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                recon(i, j) += out.values[k] * out.vectors(i, k) * std::conj(out.vectors(j, k));
            }
        }
    }
    const Matrix gram = out.vectors.adjoint() * out.vectors;
    if (recon.max_abs_diff(h.matrix()) > tol::eig_reconstruction * std::max(1.0, h.matrix().max_abs()) ||
        gram.max_abs_diff(Matrix::identity(n)) > tol::eig_reconstruction) {
        throw Error(ErrorCode::InvariantViolation, "eigendecomposition failed reconstruction");
    }
#endif
    return out;
}

HermitianMatrix psd_sqrt(const HermitianMatrix& m) {
    const auto eig = eig_hermitian(m);
    const int n = m.dim();
    if (eig.values.front() < -tol::psd) {
        throw Error(ErrorCode::NotPsd, "minimum eigenvalue " + std::to_string(eig.values.front()));
    }
    const double floor = tol::relative_rank * std::max(0.0, eig.values.back());
    Matrix r(n);
    for (int k = 0; k < n; ++k) {
        const double lambda = eig.values[k];
        if (lambda <= floor) {
            continue;
        }
        const double root = std::sqrt(lambda);
        for (int i = 0; i < n; ++i) {
            const Complex vik = root * eig.vectors(i, k);
            for (int j = 0; j < n; ++j) {
                r(i, j) += vik * std::conj(eig.vectors(j, k));
            }
        }
    }
    return HermitianMatrix(r, true);
}

// ---------------------------------------------------------------------------
// Tensor structure

Matrix kron(const Matrix& a, const Matrix& b) {
    const int da = a.dim();
    const int db = b.dim();
    if (da * db > kMaxDim) {
        throw Error(ErrorCode::DimOverflow,
                    std::to_string(da) + "x" + std::to_string(db) + " exceeds " +
                        std::to_string(kMaxDim));
    }
    Matrix r(da * db);
    for (int ia = 0; ia < da; ++ia) {
        for (int ja = 0; ja < da; ++ja) {
            const Complex x = a(ia, ja);
            for (int ib = 0; ib < db; ++ib) {
                for (int jb = 0; jb < db; ++jb) {
                    r(ia * db + ib, ja * db + jb) = x * b(ib, jb);
                }
            }
        }
    }
    return r;
}

HermitianMatrix kron(const HermitianMatrix& a, const HermitianMatrix& b) {
    return HermitianMatrix(kron(a.matrix(), b.matrix()), a.psd_hint() && b.psd_hint());
}

Matrix partial_trace(const Matrix& m, QubitMask keep) {
    const int k = qubit_count(m.dim());
    if (k < 1) {
        throw Error(ErrorCode::BadMask, "dimension is not a power of two");
    }
    const QubitMask all = (1u << k) - 1u;
    if (keep == 0 || (keep & ~all) != 0) {
        throw Error(ErrorCode::BadMask, "mask " + std::to_string(keep) + " for " +
                                            std::to_string(k) + " qubits");
    }

    // Qubit q (from the left) is bit (k-1-q) of a basis index.
    std::vector<int> kept;
    std::vector<int> traced;
    for (int q = 0; q < k; ++q) {
        ((keep >> q) & 1u ? kept : traced).push_back(k - 1 - q);
    }
    auto compose = [](const std::vector<int>& bits, int value) {
        int index = 0;
        const int nb = static_cast<int>(bits.size());
        for (int i = 0; i < nb; ++i) {
            if ((value >> (nb - 1 - i)) & 1) {
                index |= 1 << bits[i];
            }
        }
        return index;
    };

    const int dk = 1 << kept.size();
    const int dt = 1 << traced.size();
    Matrix r(dk);
    for (int i = 0; i < dk; ++i) {
        const int ri = compose(kept, i);
        for (int j = 0; j < dk; ++j) {
            const int rj = compose(kept, j);
            Complex acc = 0.0;
            for (int t = 0; t < dt; ++t) {
                const int tt = compose(traced, t);
                acc += m(ri | tt, rj | tt);
            }
            r(i, j) = acc;
        }
    }
    return r;
}

HermitianMatrix partial_trace(const HermitianMatrix& m, QubitMask keep) {
    return HermitianMatrix(partial_trace(m.matrix(), keep), m.psd_hint());
}

}  // namespace steerdist
