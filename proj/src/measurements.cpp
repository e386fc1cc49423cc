// SPDX-License-Identifier: Apache-2.0

#include "phasekit/measurements.hpp"

#include <cmath>
#include <numbers>

#include "phasekit/frames.hpp"

namespace phasekit {

std::string_view to_string(EnsembleKind kind) {
    switch (kind) {
        case EnsembleKind::Phi: return "phi";
        case EnsembleKind::Psi: return "psi";
        case EnsembleKind::Random: return "random";
    }
    return "?";
}

EnsembleKind parse_kind(std::string_view text) {
    if (text == "phi") return EnsembleKind::Phi;
    if (text == "psi") return EnsembleKind::Psi;
    if (text == "random") return EnsembleKind::Random;
    throw std::invalid_argument("unknown ensemble kind '" + std::string(text) + "'");
}

Ensemble::Ensemble(EnsembleKind kind, std::size_t n, std::vector<ComplexVector> vectors)
    : kind_(kind), n_(n), vectors_(std::move(vectors)) {
    if (n_ == 0) throw DimensionError("ensemble: dimension must be positive");
    if (kind_ != EnsembleKind::Random) {
        if (n_ < 2) throw DimensionError("ensemble: deterministic kinds need N >= 2");
        if (vectors_.size() != deterministic_count(n_)) {
            throw DimensionError("ensemble: deterministic kinds need 4(N-1) vectors");
        }
    } else if (vectors_.empty()) {
        throw DimensionError("ensemble: empty random ensemble");
    }
    supports_.reserve(vectors_.size());
    for (const auto& v : vectors_) {
        if (v.size() != n_) throw DimensionError("ensemble: vector length does not match N");
        if (kind_ == EnsembleKind::Random && std::abs(v.norm() - 1.0) > 1e-12) {
            throw std::invalid_argument("ensemble: random vectors must have unit norm");
        }
        std::vector<std::size_t> s;
        for (std::size_t k = 0; k < n_; ++k) {
            if (v[k] != cplx{0.0, 0.0}) s.push_back(k);
        }
        supports_.push_back(std::move(s));
    }
}

Ensemble build_ensemble(EnsembleKind kind, std::size_t n) {
    if (kind == EnsembleKind::Random) {
        throw std::invalid_argument("build_ensemble: random ensembles need an Rng");
    }
    if (n < 2) throw DimensionError("build_ensemble: N must be at least 2");
    const auto& frame = standard_frame();
    std::vector<ComplexVector> vecs(deterministic_count(n), ComplexVector(n));
    for (std::size_t b = 0; b + 1 < n; ++b) {
        const std::size_t first = kind == EnsembleKind::Phi ? b : 0;
        for (std::size_t m = 0; m < kFrameSize; ++m) {
            auto& v = vecs[Ensemble::index(m, b)];
            v[first] = frame.a[m][0];
            v[b + 1] = frame.a[m][1];
        }
    }
    return Ensemble(kind, n, std::move(vecs));
}

Ensemble build_random_ensemble(Rng& rng, std::size_t n, std::size_t l) {
    if (n == 0 || l == 0) throw DimensionError("build_random_ensemble: N and L must be positive");
    std::vector<ComplexVector> vecs;
    vecs.reserve(l);
    while (vecs.size() < l) {
        ComplexVector v = gaussian_complex(rng, n, 1.0);
        const double nv = v.norm();
        if (nv == 0.0) continue;
        v *= 1.0 / nv;
        vecs.push_back(std::move(v));
    }
    return Ensemble(EnsembleKind::Random, n, std::move(vecs));
}

IntensityVector measure(const Ensemble& ensemble, const ComplexVector& x) {
    if (x.size() != ensemble.dim()) throw DimensionError("measure: signal length does not match N");
    IntensityVector b;
    b.values.resize(ensemble.size());
    for (std::size_t l = 0; l < ensemble.size(); ++l) {
        const auto& v = ensemble.vector(l);
        cplx s{0.0, 0.0};
        for (std::size_t k : ensemble.support(l)) s += x[k] * std::conj(v[k]);
        b.values[l] = std::norm(s);
    }
    return b;
}

IntensityVector measure_lifted(const Ensemble& ensemble, const HermitianMatrix& x) {
    if (x.dim() != ensemble.dim()) throw DimensionError("measure_lifted: matrix size does not match N");
    IntensityVector b;
    b.values.resize(ensemble.size());
    for (std::size_t l = 0; l < ensemble.size(); ++l) {
        const auto& v = ensemble.vector(l);
        const auto& s = ensemble.support(l);
        double acc = 0.0;
        for (std::size_t j : s) {
            cplx row{0.0, 0.0};
            for (std::size_t k : s) row += x(j, k) * v[k];
            acc += (std::conj(v[j]) * row).real();
        }
        b.values[l] = acc;
    }
    return b;
}

HermitianMatrix adjoint(const Ensemble& ensemble, std::span<const double> b) {
    if (b.size() != ensemble.size()) throw DimensionError("adjoint: length does not match L");
    const std::size_t n = ensemble.dim();
    std::vector<cplx> dense(n * n, cplx{0.0, 0.0});
    for (std::size_t l = 0; l < ensemble.size(); ++l) {
        if (b[l] == 0.0) continue;
        const auto& v = ensemble.vector(l);
        const auto& s = ensemble.support(l);
        for (std::size_t j : s) {
            const cplx vj = b[l] * v[j];
            for (std::size_t k : s) dense[j * n + k] += vj * std::conj(v[k]);
        }
    }
    return HermitianMatrix::from_dense(n, dense);
}

HermitianMatrix adjoint(const Ensemble& ensemble, const IntensityVector& b) {
    return adjoint(ensemble, std::span<const double>(b.values));
}

IntensityVector add_noise(const IntensityVector& b, double sigma_nu2, Rng& rng) {
    if (!(sigma_nu2 >= 0.0) || !std::isfinite(sigma_nu2)) {
        throw std::invalid_argument("add_noise: variance must be finite and nonnegative");
    }
    const double s = std::sqrt(sigma_nu2);
    IntensityVector out = b;
    for (auto& v : out.values) v += s * rng.normal();
    out.noise_variance = sigma_nu2;
    return out;
}

MaskSet build_masks(EnsembleKind kind, std::size_t n) {
    if (kind == EnsembleKind::Random) throw std::invalid_argument("build_masks: no masks for random");
    if (n < 2) throw DimensionError("build_masks: N must be at least 2");
    const auto& frame = standard_frame();
    MaskSet ms{kind, n, {}};
    for (std::size_t m = 0; m < kFrameSize; ++m) {
        const cplx c0 = std::conj(frame.a[m][0]);
        const cplx c1 = std::conj(frame.a[m][1]);
        ComplexVector p(n);
        for (std::size_t t = 0; t < n; ++t) {
            if (kind == EnsembleKind::Phi) {
                const double ang = -2.0 * std::numbers::pi * static_cast<double>(t) /
                                   static_cast<double>(n);
                p[t] = c0 + c1 * cplx{std::cos(ang), std::sin(ang)};
            } else {
                p[t] = (t == 0 ? c0 : cplx{0.0, 0.0}) + c1;
            }
        }
        ms.masks[m] = std::move(p);
    }
    return ms;
}

IntensityVector mask_measure(const ComplexVector& x, const MaskSet& masks) {
    const std::size_t n = masks.n;
    if (x.size() != n) throw DimensionError("mask_measure: signal length does not match masks");
    const std::size_t blocks = masks.kind == EnsembleKind::Phi ? n - 1 : n;
    IntensityVector b;
    b.values.resize(4 * blocks);
    for (std::size_t m = 0; m < 4; ++m) {
        ComplexVector y(n);
        for (std::size_t t = 0; t < n; ++t) y[t] = x[t] * masks.masks[m][t];
        const ComplexVector yh = dft(y);
        for (std::size_t w = 0; w < blocks; ++w) b.values[Ensemble::index(m, w)] = std::norm(yh[w]);
    }
    return b;
}

ComplexVector psi_augment(const ComplexVector& x) {
    const ComplexVector xh = dft(x);
    ComplexVector out(x.size() + 1);
    out[0] = x[0];
    for (std::size_t k = 0; k < xh.size(); ++k) out[k + 1] = xh[k];
    return out;
}

bool in_recoverable_set(EnsembleKind kind, const ComplexVector& x, double mu) {
    if (!(mu >= 0.0)) throw std::invalid_argument("in_recoverable_set: mu must be nonnegative");
    if (x.empty()) throw DimensionError("in_recoverable_set: empty signal");
    switch (kind) {
        case EnsembleKind::Phi:
            for (std::size_t k = 1; k + 1 < x.size(); ++k) {
                if (!(std::abs(x[k]) > mu)) return false;
            }
            return true;
        case EnsembleKind::Psi:
            return std::abs(x[0]) > mu;
        case EnsembleKind::Random:
            break;
    }
    throw std::invalid_argument("in_recoverable_set: defined for phi and psi only");
}

}  // namespace phasekit
