// SPDX-License-Identifier: Apache-2.0
//
// Finite linear-algebra checks of the uniqueness theory for the
// deterministic ensembles: kernel of the lifted map, tangent spaces at
// x x^*, injectivity of the lifted map on them, and the dual certificate.
//
// Hermitian matrices are vectorized isometrically into R^{N^2}: diagonal
// entries first, then sqrt(2) Re and sqrt(2) Im of each upper-triangle
// entry in row-major order.

#pragma once

#include <stdexcept>
#include <vector>

#include "phasekit/measurements.hpp"

namespace phasekit {

class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

std::vector<double> vectorize(const HermitianMatrix& x);
HermitianMatrix devectorize(std::size_t n, std::span<const double> v);

/// Dense real m x n matrix, row-major.
struct RealMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> a;

    RealMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0.0) {}
    double& operator()(std::size_t r, std::size_t c) { return a[r * cols + c]; }
    double operator()(std::size_t r, std::size_t c) const { return a[r * cols + c]; }
};

struct SingularValues {
    std::vector<double> sigma;                // descending
    std::vector<std::vector<double>> right;   // right singular vectors, paired
};

/// One-sided (Hestenes) Jacobi SVD.
SingularValues svd_jacobi(const RealMatrix& m);

/// Number of singular values above 1e-9 * sigma_max.
std::size_t numerical_rank(const SingularValues& s);

/// Row l is vectorize(v_l v_l^*).
RealMatrix lifted_matrix(const Ensemble& ensemble);

/// Orthonormal (Hilbert-Schmidt) basis of ker A for Phi or Psi.
std::vector<HermitianMatrix> nullspace_basis(EnsembleKind kind, std::size_t n);

struct TangentSpace {
    ComplexVector x;
    std::vector<HermitianMatrix> basis;  // orthonormal, spans {x y^* + y x^*}
};

TangentSpace tangent_space(const ComplexVector& x);

struct InjectivityReport {
    std::size_t rank = 0;
    std::size_t dimension = 0;  // dim T_x = 2N - 1
    bool injective = false;
    double sigma_min = 0.0;     // smallest singular value of A restricted to T_x
};

InjectivityReport check_injectivity_on_T(EnsembleKind kind, const ComplexVector& x);

struct Certificate {
    HermitianMatrix Y;
    std::vector<double> gamma;     // indexed like the ensemble, l = 4 n + m
    std::vector<double> spectrum;  // eigenvalues of Y, descending
};

/// Requires x in the recoverable set of the kind (PreconditionError otherwise).
Certificate build_certificate(EnsembleKind kind, const ComplexVector& x);

}  // namespace phasekit
