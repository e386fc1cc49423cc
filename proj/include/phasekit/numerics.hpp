// SPDX-License-Identifier: Apache-2.0
//
// Complex vector / Hermitian matrix primitives, the DFT used throughout the
// measurement pipeline, and Hermitian eigensolvers.
//
// Indexing is zero-based in code. Where documentation speaks of x[1], x[2],
// ... (one-based, as is customary for the measurement design) the code uses
// x[0], x[1], ...

#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace phasekit {

using cplx = std::complex<double>;

/// Thrown when operands disagree in size or a size precondition fails.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Thrown by iterative solvers that hit their iteration cap.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double residual)
        : std::runtime_error(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// Fixed-length complex vector. Entries are finite by construction.
class ComplexVector {
public:
    ComplexVector() = default;
    explicit ComplexVector(std::size_t n) : data_(n, cplx{0.0, 0.0}) {}
    explicit ComplexVector(std::vector<cplx> entries);
    ComplexVector(std::initializer_list<cplx> entries);

    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    cplx& operator[](std::size_t i) { return data_[i]; }
    const cplx& operator[](std::size_t i) const { return data_[i]; }

    std::span<const cplx> entries() const noexcept { return data_; }
    std::span<cplx> entries() noexcept { return data_; }

    auto begin() noexcept { return data_.begin(); }
    auto end() noexcept { return data_.end(); }
    auto begin() const noexcept { return data_.begin(); }
    auto end() const noexcept { return data_.end(); }

    double norm() const;
    double norm_squared() const;

    ComplexVector& operator+=(const ComplexVector& other);
    ComplexVector& operator-=(const ComplexVector& other);
    ComplexVector& operator*=(cplx s);

    friend bool operator==(const ComplexVector&, const ComplexVector&) = default;

private:
    std::vector<cplx> data_;
};

ComplexVector operator+(ComplexVector a, const ComplexVector& b);
ComplexVector operator-(ComplexVector a, const ComplexVector& b);
ComplexVector operator*(cplx s, ComplexVector a);

/// <x, y> = sum_n x[n] * conj(y[n]).
cplx inner(const ComplexVector& x, const ComplexVector& y);

/// Canonical basis vector e_k (zero-based k).
ComplexVector unit_vector(std::size_t n, std::size_t k);

/// N x N Hermitian matrix with the Hilbert-Schmidt inner product
/// <X, Y> = trace(Y^* X). Stored row-major; Hermitian symmetry is exact.
class HermitianMatrix {
public:
    HermitianMatrix() = default;
    explicit HermitianMatrix(std::size_t n) : n_(n), data_(n * n, cplx{0.0, 0.0}) {}

    /// Builds from a dense row-major grid. Rejects non-finite entries and
    /// asymmetry ||X - X^*||_F > 1e-12 * ||X||_F; the accepted input is
    /// symmetrized exactly.
    static HermitianMatrix from_dense(std::size_t n, std::span<const cplx> row_major);
    static HermitianMatrix from_rows(std::initializer_list<std::initializer_list<cplx>> rows);
    static HermitianMatrix identity(std::size_t n);
    static HermitianMatrix diagonal(std::span<const double> d);
    /// x x^*
    static HermitianMatrix outer(const ComplexVector& x);

    std::size_t dim() const noexcept { return n_; }

    cplx operator()(std::size_t r, std::size_t c) const { return data_[r * n_ + c]; }

    /// Writes entry (r, c) and its mirror (c, r). Diagonal writes keep only
    /// the real part.
    void set(std::size_t r, std::size_t c, cplx value);
    void add(std::size_t r, std::size_t c, cplx value);

    std::span<const cplx> data() const noexcept { return data_; }

    double trace() const;
    double frobenius_norm() const;
    /// Largest absolute eigenvalue.
    double spectral_norm() const;

    ComplexVector apply(const ComplexVector& x) const;

    HermitianMatrix& operator+=(const HermitianMatrix& other);
    HermitianMatrix& operator-=(const HermitianMatrix& other);
    HermitianMatrix& operator*=(double s);

    /// Adds s * v v^* in place.
    void add_outer(const ComplexVector& v, double s);

    friend bool operator==(const HermitianMatrix&, const HermitianMatrix&) = default;

private:
    std::size_t n_ = 0;
    std::vector<cplx> data_;
};

HermitianMatrix operator+(HermitianMatrix a, const HermitianMatrix& b);
HermitianMatrix operator-(HermitianMatrix a, const HermitianMatrix& b);
HermitianMatrix operator*(double s, HermitianMatrix a);

/// Hilbert-Schmidt inner product; always real for Hermitian arguments.
double hs_inner(const HermitianMatrix& x, const HermitianMatrix& y);

/// Eigenvalues sorted descending, eigenvectors orthonormal and paired by index.
struct EigenDecomposition {
    std::vector<double> eigenvalues;
    std::vector<ComplexVector> eigenvectors;

    HermitianMatrix reconstruct() const;
};

/// Dense real symmetric matrix, row-major. Used for Gram matrices and the
/// real embedding of Hermitian problems.
struct SymmetricMatrix {
    std::size_t n = 0;
    std::vector<double> a;

    explicit SymmetricMatrix(std::size_t dim = 0) : n(dim), a(dim * dim, 0.0) {}
    double& operator()(std::size_t r, std::size_t c) { return a[r * n + c]; }
    double operator()(std::size_t r, std::size_t c) const { return a[r * n + c]; }
};

struct SymmetricEigen {
    std::vector<double> eigenvalues;          // descending
    std::vector<std::vector<double>> vectors; // orthonormal, paired by index
};

/// Cyclic Jacobi. Stops once the off-diagonal Frobenius norm falls below
/// 1e-12 of the full norm; throws ConvergenceError after 100 sweeps.
SymmetricEigen eig_symmetric(const SymmetricMatrix& m);

/// Largest supported dimension for eig_hermitian (the real embedding is 2N).
inline constexpr std::size_t kMaxEigDimension = 1024;

/// Full Hermitian eigendecomposition via the real embedding
/// [[Re X, -Im X], [Im X, Re X]] and cyclic Jacobi.
EigenDecomposition eig_hermitian(const HermitianMatrix& x);

/// Closed-form 2 x 2 Hermitian eigensolver.
EigenDecomposition eig2_hermitian(const HermitianMatrix& q);

/// Frobenius-nearest positive semidefinite matrix (negative eigenvalues
/// clamped to zero).
HermitianMatrix project_psd(const HermitianMatrix& x);

/// x_hat[w] = sum_t x[t] exp(-2 pi i w t / N), zero-based w, t.
ComplexVector dft(const ComplexVector& x);
/// Inverse of dft, including the 1/N factor.
ComplexVector idft(const ComplexVector& xhat);

}  // namespace phasekit
