// SPDX-License-Identifier: Apache-2.0

#include "phasekit/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace phasekit {

namespace {

void require_finite(cplx z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw std::invalid_argument("non-finite entry");
    }
}

void require_same_size(std::size_t a, std::size_t b, const char* what) {
    if (a != b) {
        throw DimensionError(std::string(what) + ": dimension mismatch (" + std::to_string(a) +
                             " vs " + std::to_string(b) + ")");
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// ComplexVector

ComplexVector::ComplexVector(std::vector<cplx> entries) : data_(std::move(entries)) {
    for (const auto& z : data_) require_finite(z);
}

ComplexVector::ComplexVector(std::initializer_list<cplx> entries) : data_(entries) {
    for (const auto& z : data_) require_finite(z);
}

double ComplexVector::norm_squared() const {
    double s = 0.0;
    for (const auto& z : data_) s += std::norm(z);
    return s;
}

double ComplexVector::norm() const { return std::sqrt(norm_squared()); }

ComplexVector& ComplexVector::operator+=(const ComplexVector& other) {
    require_same_size(size(), other.size(), "vector add");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
    return *this;
}

ComplexVector& ComplexVector::operator-=(const ComplexVector& other) {
    require_same_size(size(), other.size(), "vector subtract");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
    return *this;
}

ComplexVector& ComplexVector::operator*=(cplx s) {
    for (auto& z : data_) z *= s;
    return *this;
}

ComplexVector operator+(ComplexVector a, const ComplexVector& b) { return a += b; }
ComplexVector operator-(ComplexVector a, const ComplexVector& b) { return a -= b; }
ComplexVector operator*(cplx s, ComplexVector a) { return a *= s; }

cplx inner(const ComplexVector& x, const ComplexVector& y) {
    require_same_size(x.size(), y.size(), "inner");
    cplx s{0.0, 0.0};
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * std::conj(y[i]);
    return s;
}

ComplexVector unit_vector(std::size_t n, std::size_t k) {
    if (k >= n) throw DimensionError("unit_vector: index out of range");
    ComplexVector e(n);
    e[k] = 1.0;
    return e;
}

// ---------------------------------------------------------------------------
// HermitianMatrix

HermitianMatrix HermitianMatrix::from_dense(std::size_t n, std::span<const cplx> row_major) {
    if (row_major.size() != n * n) throw DimensionError("from_dense: expected n*n entries");
    double asym = 0.0;
    double total = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            const cplx v = row_major[r * n + c];
            require_finite(v);
            total += std::norm(v);
            asym += std::norm(v - std::conj(row_major[c * n + r]));
        }
    }
    if (std::sqrt(asym) > 1e-12 * std::sqrt(total)) {
        throw std::invalid_argument("from_dense: matrix is not Hermitian");
    }
    HermitianMatrix m(n);
    for (std::size_t r = 0; r < n; ++r) {
        m.data_[r * n + r] = row_major[r * n + r].real();
        for (std::size_t c = r + 1; c < n; ++c) {
            const cplx v = 0.5 * (row_major[r * n + c] + std::conj(row_major[c * n + r]));
            m.data_[r * n + c] = v;
            m.data_[c * n + r] = std::conj(v);
        }
    }
    return m;
}

HermitianMatrix HermitianMatrix::from_rows(
    std::initializer_list<std::initializer_list<cplx>> rows) {
    const std::size_t n = rows.size();
    std::vector<cplx> flat;
    flat.reserve(n * n);
    for (const auto& row : rows) {
        if (row.size() != n) throw DimensionError("from_rows: matrix must be square");
        flat.insert(flat.end(), row.begin(), row.end());
    }
    return from_dense(n, flat);
}

HermitianMatrix HermitianMatrix::identity(std::size_t n) {
    HermitianMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m.data_[i * n + i] = 1.0;
    return m;
}

HermitianMatrix HermitianMatrix::diagonal(std::span<const double> d) {
    HermitianMatrix m(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        require_finite(d[i]);
        m.data_[i * d.size() + i] = d[i];
    }
    return m;
}

HermitianMatrix HermitianMatrix::outer(const ComplexVector& x) {
    HermitianMatrix m(x.size());
    m.add_outer(x, 1.0);
    return m;
}

void HermitianMatrix::set(std::size_t r, std::size_t c, cplx value) {
    require_finite(value);
    if (r == c) {
        data_[r * n_ + r] = value.real();
    } else {
        data_[r * n_ + c] = value;
        data_[c * n_ + r] = std::conj(value);
    }
}

void HermitianMatrix::add(std::size_t r, std::size_t c, cplx value) {
    set(r, c, (*this)(r, c) + value);
}

double HermitianMatrix::trace() const {
    double t = 0.0;
    for (std::size_t i = 0; i < n_; ++i) t += data_[i * n_ + i].real();
    return t;
}

double HermitianMatrix::frobenius_norm() const {
    double s = 0.0;
    for (const auto& z : data_) s += std::norm(z);
    return std::sqrt(s);
}

double HermitianMatrix::spectral_norm() const {
    if (n_ == 0) return 0.0;
    const auto ed = eig_hermitian(*this);
    return std::max(std::abs(ed.eigenvalues.front()), std::abs(ed.eigenvalues.back()));
}

ComplexVector HermitianMatrix::apply(const ComplexVector& x) const {
    require_same_size(n_, x.size(), "apply");
    ComplexVector y(n_);
    for (std::size_t r = 0; r < n_; ++r) {
        cplx s{0.0, 0.0};
        for (std::size_t c = 0; c < n_; ++c) s += data_[r * n_ + c] * x[c];
        y[r] = s;
    }
    return y;
}

HermitianMatrix& HermitianMatrix::operator+=(const HermitianMatrix& other) {
    require_same_size(n_, other.n_, "matrix add");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
    return *this;
}

HermitianMatrix& HermitianMatrix::operator-=(const HermitianMatrix& other) {
    require_same_size(n_, other.n_, "matrix subtract");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
    return *this;
}

HermitianMatrix& HermitianMatrix::operator*=(double s) {
    for (auto& z : data_) z *= s;
    return *this;
}

void HermitianMatrix::add_outer(const ComplexVector& v, double s) {
    require_same_size(n_, v.size(), "add_outer");
    for (std::size_t r = 0; r < n_; ++r) {
        if (v[r] == cplx{0.0, 0.0}) continue;
        data_[r * n_ + r] += s * std::norm(v[r]);
        for (std::size_t c = r + 1; c < n_; ++c) {
            const cplx z = s * v[r] * std::conj(v[c]);
            data_[r * n_ + c] += z;
            data_[c * n_ + r] += std::conj(z);
        }
    }
}

HermitianMatrix operator+(HermitianMatrix a, const HermitianMatrix& b) { return a += b; }
HermitianMatrix operator-(HermitianMatrix a, const HermitianMatrix& b) { return a -= b; }
HermitianMatrix operator*(double s, HermitianMatrix a) { return a *= s; }

double hs_inner(const HermitianMatrix& x, const HermitianMatrix& y) {
    require_same_size(x.dim(), y.dim(), "hs_inner");
    const auto xd = x.data();
    const auto yd = y.data();
    double s = 0.0;
    for (std::size_t i = 0; i < xd.size(); ++i) {
        s += xd[i].real() * yd[i].real() + xd[i].imag() * yd[i].imag();
    }
    return s;
}

HermitianMatrix EigenDecomposition::reconstruct() const {
    const std::size_t n = eigenvectors.empty() ? 0 : eigenvectors.front().size();
    HermitianMatrix m(n);
    for (std::size_t k = 0; k < eigenvalues.size(); ++k) m.add_outer(eigenvectors[k], eigenvalues[k]);
    return m;
}

// ---------------------------------------------------------------------------
// Eigensolvers

SymmetricEigen eig_symmetric(const SymmetricMatrix& m) {
    constexpr int kMaxSweeps = 100;
    const std::size_t n = m.n;
    std::vector<double> a = m.a;
    std::vector<double> v(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

    double total = 0.0;
    for (double x : a) total += x * x;
    const double target = 1e-12 * std::sqrt(total);

    auto off_norm = [&] {
        double s = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) s += a[p * n + q] * a[p * n + q];
        return std::sqrt(2.0 * s);
    };

    double off = off_norm();
    int sweep = 0;
    while (off > target) {
        if (sweep++ >= kMaxSweeps) {
            throw ConvergenceError("eig_symmetric: Jacobi did not converge", off);
        }
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a[p * n + q];
                if (apq == 0.0) continue;
                const double app = a[p * n + p];
                const double aqq = a[q * n + q];
                const double theta = (aqq - app) / (2.0 * apq);
                double t;
                if (std::abs(theta) > 1e150) {
                    t = 0.5 / theta;
                } else {
                    t = (theta >= 0.0 ? 1.0 : -1.0) /
                        (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                }
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                a[p * n + p] = app - t * apq;
                a[q * n + q] = aqq + t * apq;
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    if (k == p || k == q) continue;
                    const double akp = a[k * n + p];
                    const double akq = a[k * n + q];
                    const double nkp = c * akp - s * akq;
                    const double nkq = s * akp + c * akq;
                    a[k * n + p] = nkp;
                    a[p * n + k] = nkp;
                    a[k * n + q] = nkq;
                    a[q * n + k] = nkq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v[k * n + p];
                    const double vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
        off = off_norm();
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a[i * n + i] > a[j * n + j]; });

    SymmetricEigen out;
    out.eigenvalues.reserve(n);
    out.vectors.reserve(n);
    for (std::size_t k : order) {
        out.eigenvalues.push_back(a[k * n + k]);
        std::vector<double> col(n);
        for (std::size_t r = 0; r < n; ++r) col[r] = v[r * n + k];
        out.vectors.push_back(std::move(col));
    }
    return out;
}

EigenDecomposition eig_hermitian(const HermitianMatrix& x) {
    const std::size_t n = x.dim();
    if (n == 0) return {};
    if (n > kMaxEigDimension) throw DimensionError("eig_hermitian: dimension above supported limit");

    SymmetricMatrix emb(2 * n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            const cplx z = x(r, c);
            emb(r, c) = z.real();
            emb(r + n, c + n) = z.real();
            emb(r, c + n) = -z.imag();
            emb(r + n, c) = z.imag();
        }
    }
    const SymmetricEigen se = eig_symmetric(emb);

    // Each eigenvalue of X appears twice in the embedding, with real
    // eigenvectors (a; b) and (-b; a) that both map to the complex line of
    // u = a + i b. Near-equal eigenvalues are grouped and, within a group,
    // half as many complex vectors are extracted by pivoted Gram-Schmidt.
    double scale = 0.0;
    for (double l : se.eigenvalues) scale = std::max(scale, std::abs(l));
    const double cluster_tol = 1e-10 * std::max(scale, std::numeric_limits<double>::min());

    std::vector<std::pair<double, ComplexVector>> pairs;
    pairs.reserve(n);

    const std::size_t m = 2 * n;
    std::size_t begin = 0;
    while (begin < m && pairs.size() < n) {
        std::size_t end = begin + 1;
        while (end < m && (se.eigenvalues[end - 1] - se.eigenvalues[end] <= cluster_tol ||
                           (end - begin) % 2 == 1)) {
            ++end;
        }
        const std::size_t want = std::min((end - begin) / 2, n - pairs.size());

        std::vector<ComplexVector> candidates;
        candidates.reserve(end - begin);
        for (std::size_t k = begin; k < end; ++k) {
            ComplexVector u(n);
            for (std::size_t r = 0; r < n; ++r) u[r] = cplx{se.vectors[k][r], se.vectors[k][r + n]};
            candidates.push_back(std::move(u));
        }
        std::vector<bool> used(candidates.size(), false);
        std::vector<ComplexVector> accepted;
        for (std::size_t pick = 0; pick < want; ++pick) {
            std::size_t best = candidates.size();
            double best_norm = -1.0;
            ComplexVector best_vec;
            for (std::size_t c = 0; c < candidates.size(); ++c) {
                if (used[c]) continue;
                ComplexVector r = candidates[c];
                for (int pass = 0; pass < 2; ++pass) {
                    for (const auto& q : accepted) r -= inner(r, q) * q;
                }
                const double nr = r.norm();
                if (nr > best_norm) {
                    best_norm = nr;
                    best = c;
                    best_vec = std::move(r);
                }
            }
            used[best] = true;
            best_vec *= 1.0 / best_norm;
            accepted.push_back(best_vec);
            const double rq = inner(x.apply(best_vec), best_vec).real();
            pairs.emplace_back(rq, std::move(best_vec));
        }
        begin = end;
    }

    std::stable_sort(pairs.begin(), pairs.end(),
                     [](const auto& l, const auto& r) { return l.first > r.first; });
    EigenDecomposition ed;
    for (auto& [lambda, u] : pairs) {
        ed.eigenvalues.push_back(lambda);
        ed.eigenvectors.push_back(std::move(u));
    }
    return ed;
}

EigenDecomposition eig2_hermitian(const HermitianMatrix& q) {
    if (q.dim() != 2) throw DimensionError("eig2_hermitian: expected a 2x2 matrix");
    const double a = q(0, 0).real();
    const double d = q(1, 1).real();
    const cplx b = q(0, 1);
    const double tr = a + d;
    // (a - d)^2 + 4|b|^2 equals tr^2 - 4 det without the cancellation.
    const double disc = std::sqrt((a - d) * (a - d) + 4.0 * std::norm(b));
    const double l1 = 0.5 * (tr + disc);
    const double l2 = 0.5 * (tr - disc);

    const ComplexVector c1{b, cplx{l1 - a, 0.0}};
    const ComplexVector c2{cplx{l1 - d, 0.0}, std::conj(b)};
    const double n1 = c1.norm();
    const double n2 = c2.norm();
    ComplexVector u1;
    if (std::max(n1, n2) == 0.0) {
        u1 = ComplexVector{1.0, 0.0};
    } else if (n1 >= n2) {
        u1 = (1.0 / n1) * c1;
    } else {
        u1 = (1.0 / n2) * c2;
    }
    ComplexVector u2{-std::conj(u1[1]), std::conj(u1[0])};

    EigenDecomposition ed;
    ed.eigenvalues = {l1, l2};
    ed.eigenvectors = {std::move(u1), std::move(u2)};
    return ed;
}

HermitianMatrix project_psd(const HermitianMatrix& x) {
    const auto ed = eig_hermitian(x);
    HermitianMatrix out(x.dim());
    for (std::size_t k = 0; k < ed.eigenvalues.size(); ++k) {
        if (ed.eigenvalues[k] > 0.0) out.add_outer(ed.eigenvectors[k], ed.eigenvalues[k]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// DFT

namespace {

std::vector<cplx> twiddles(std::size_t n, double sign) {
    std::vector<cplx> w(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double angle = sign * 2.0 * std::numbers::pi * static_cast<double>(k) /
                             static_cast<double>(n);
        w[k] = cplx{std::cos(angle), std::sin(angle)};
    }
    return w;
}

ComplexVector direct_transform(const ComplexVector& x, double sign, double scale) {
    const std::size_t n = x.size();
    if (n == 0) throw DimensionError("dft: empty input");
    const auto w = twiddles(n, sign);
    std::vector<cplx> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        cplx s{0.0, 0.0};
        std::size_t idx = 0;
        for (std::size_t t = 0; t < n; ++t) {
            s += x[t] * w[idx];
            idx += k;
            if (idx >= n) idx -= n;
        }
        out[k] = scale * s;
    }
    return ComplexVector(std::move(out));
}

}  // namespace

ComplexVector dft(const ComplexVector& x) { return direct_transform(x, -1.0, 1.0); }

ComplexVector idft(const ComplexVector& xhat) {
    return direct_transform(xhat, 1.0, 1.0 / static_cast<double>(xhat.size()));
}

}  // namespace phasekit
