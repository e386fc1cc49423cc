// SPDX-License-Identifier: Apache-2.0

#include "phasekit/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "phasekit/frames.hpp"

namespace phasekit {

namespace {

constexpr double kRankCutoff = 1e-9;

}  // namespace

std::vector<double> vectorize(const HermitianMatrix& x) {
    const std::size_t n = x.dim();
    std::vector<double> v;
    v.reserve(n * n);
    for (std::size_t i = 0; i < n; ++i) v.push_back(x(i, i).real());
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = r + 1; c < n; ++c) {
            v.push_back(std::numbers::sqrt2 * x(r, c).real());
            v.push_back(std::numbers::sqrt2 * x(r, c).imag());
        }
    }
    return v;
}

HermitianMatrix devectorize(std::size_t n, std::span<const double> v) {
    if (v.size() != n * n) throw DimensionError("devectorize: expected N^2 coordinates");
    HermitianMatrix x(n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) x.set(i, i, v[k++]);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = r + 1; c < n; ++c) {
            const double re = v[k++] / std::numbers::sqrt2;
            const double im = v[k++] / std::numbers::sqrt2;
            x.set(r, c, cplx{re, im});
        }
    }
    return x;
}

SingularValues svd_jacobi(const RealMatrix& m) {
    constexpr int kMaxSweeps = 100;
    const std::size_t rows = m.rows;
    const std::size_t cols = m.cols;
    // Work on columns stored contiguously.
    std::vector<std::vector<double>> u(cols, std::vector<double>(rows));
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) u[c][r] = m(r, c);
    std::vector<std::vector<double>> v(cols, std::vector<double>(cols, 0.0));
    for (std::size_t c = 0; c < cols; ++c) v[c][c] = 1.0;

    auto dot = [](const std::vector<double>& a, const std::vector<double>& b) {
        double s = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
        return s;
    };

    const double eps = 1e-15;
    for (int sweep = 0;; ++sweep) {
        if (sweep >= kMaxSweeps) throw ConvergenceError("svd_jacobi: did not converge", 0.0);
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < cols; ++p) {
            for (std::size_t q = p + 1; q < cols; ++q) {
                const double alpha = dot(u[p], u[p]);
                const double beta = dot(u[q], u[q]);
                const double gamma = dot(u[p], u[q]);
                if (gamma == 0.0 || std::abs(gamma) <= eps * std::sqrt(alpha * beta)) continue;
                rotated = true;
                const double zeta = (beta - alpha) / (2.0 * gamma);
                const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (std::size_t i = 0; i < rows; ++i) {
                    const double up = u[p][i];
                    const double uq = u[q][i];
                    u[p][i] = c * up - s * uq;
                    u[q][i] = s * up + c * uq;
                }
                for (std::size_t i = 0; i < cols; ++i) {
                    const double vp = v[p][i];
                    const double vq = v[q][i];
                    v[p][i] = c * vp - s * vq;
                    v[q][i] = s * vp + c * vq;
                }
            }
        }
        if (!rotated) break;
    }

    std::vector<double> sigma(cols);
    for (std::size_t c = 0; c < cols; ++c) sigma[c] = std::sqrt(dot(u[c], u[c]));
    std::vector<std::size_t> order(cols);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return sigma[a] > sigma[b]; });
    SingularValues out;
    for (std::size_t k : order) {
        out.sigma.push_back(sigma[k]);
        out.right.push_back(std::move(v[k]));
    }
    return out;
}

std::size_t numerical_rank(const SingularValues& s) {
    if (s.sigma.empty() || s.sigma.front() == 0.0) return 0;
    const double cut = kRankCutoff * s.sigma.front();
    return static_cast<std::size_t>(
        std::count_if(s.sigma.begin(), s.sigma.end(), [&](double x) { return x > cut; }));
}

RealMatrix lifted_matrix(const Ensemble& ensemble) {
    const std::size_t n = ensemble.dim();
    RealMatrix m(ensemble.size(), n * n);
    for (std::size_t l = 0; l < ensemble.size(); ++l) {
        const auto row = vectorize(HermitianMatrix::outer(ensemble.vector(l)));
        std::copy(row.begin(), row.end(), m.a.begin() + static_cast<std::ptrdiff_t>(l * n * n));
    }
    return m;
}

std::vector<HermitianMatrix> nullspace_basis(EnsembleKind kind, std::size_t n) {
    const Ensemble e = build_ensemble(kind, n);
    const SingularValues s = svd_jacobi(lifted_matrix(e));
    const std::size_t rank = numerical_rank(s);
    std::vector<HermitianMatrix> basis;
    for (std::size_t k = rank; k < s.right.size(); ++k) basis.push_back(devectorize(n, s.right[k]));
    return basis;
}

TangentSpace tangent_space(const ComplexVector& x) {
    const std::size_t n = x.size();
    if (n == 0 || x.norm() == 0.0) throw PreconditionError("tangent_space: x must be nonzero");
    TangentSpace ts{x, {}};
    std::vector<std::vector<double>> kept;
    const double scale = x.norm();
    for (std::size_t k = 0; k < n; ++k) {
        for (cplx dir : {cplx{1.0, 0.0}, cplx{0.0, 1.0}}) {
            ComplexVector y(n);
            y[k] = dir;
            // x y^* + y x^*
            HermitianMatrix t(n);
            for (std::size_t r = 0; r < n; ++r) {
                for (std::size_t c = r; c < n; ++c) {
                    t.set(r, c, x[r] * std::conj(y[c]) + y[r] * std::conj(x[c]));
                }
            }
            std::vector<double> v = vectorize(t);
            for (int pass = 0; pass < 2; ++pass) {
                for (const auto& q : kept) {
                    double d = 0.0;
                    for (std::size_t i = 0; i < v.size(); ++i) d += v[i] * q[i];
                    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= d * q[i];
                }
            }
            double nv = 0.0;
            for (double c : v) nv += c * c;
            nv = std::sqrt(nv);
            if (nv <= 1e-10 * scale) continue;
            for (auto& c : v) c /= nv;
            kept.push_back(std::move(v));
        }
    }
    for (const auto& v : kept) ts.basis.push_back(devectorize(n, v));
    return ts;
}

InjectivityReport check_injectivity_on_T(EnsembleKind kind, const ComplexVector& x) {
    const std::size_t n = x.size();
    const Ensemble e = build_ensemble(kind, n);
    const TangentSpace ts = tangent_space(x);
    RealMatrix m(e.size(), ts.basis.size());
    for (std::size_t c = 0; c < ts.basis.size(); ++c) {
        const auto col = measure_lifted(e, ts.basis[c]).values;
        for (std::size_t r = 0; r < col.size(); ++r) m(r, c) = col[r];
    }
    const SingularValues s = svd_jacobi(m);
    InjectivityReport rep;
    rep.dimension = 2 * n - 1;
    rep.rank = numerical_rank(s);
    rep.injective = ts.basis.size() == rep.dimension && rep.rank == rep.dimension;
    rep.sigma_min = s.sigma.empty() ? 0.0 : s.sigma.back();
    return rep;
}

Certificate build_certificate(EnsembleKind kind, const ComplexVector& x) {
    if (kind == EnsembleKind::Random) throw PreconditionError("certificate: deterministic kinds only");
    const std::size_t n = x.size();
    if (n < 2) throw DimensionError("certificate: N must be at least 2");
    if (!in_recoverable_set(kind, x)) {
        throw PreconditionError("certificate: x is outside the recoverable set");
    }
    const Ensemble e = build_ensemble(kind, n);
    Certificate cert;
    cert.gamma.assign(e.size(), 0.0);
    for (std::size_t blk = 0; blk + 1 < n; ++blk) {
        const cplx x0 = kind == EnsembleKind::Phi ? x[blk] : x[0];
        const cplx x1 = x[blk + 1];
        const double nb = std::sqrt(std::norm(x0) + std::norm(x1));
        if (nb == 0.0) throw PreconditionError("certificate: zero block");
        const ComplexVector q{-std::conj(x1) / nb, std::conj(x0) / nb};
        const FrameCoefficients g = dual_coefficients(HermitianMatrix::outer(q));
        for (std::size_t m = 0; m < kFrameSize; ++m) {
            cert.gamma[Ensemble::index(m, blk)] = kReconScale * g[m];
        }
    }
    cert.Y = adjoint(e, cert.gamma);
    cert.spectrum = eig_hermitian(cert.Y).eigenvalues;
    return cert;
}

}  // namespace phasekit
