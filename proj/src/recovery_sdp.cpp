// SPDX-License-Identifier: Apache-2.0

#include "phasekit/recovery_sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace phasekit {

namespace {

double norm2(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

void require_length(const LiftedOperator& op, std::span<const double> b) {
    if (b.size() != op.size()) throw DimensionError("lifted operator: length does not match L");
}

}  // namespace

LiftedOperator::LiftedOperator(Ensemble ensemble) : ensemble_(std::move(ensemble)) {
    const std::size_t l = ensemble_.size();
    SymmetricMatrix g(l);
    for (std::size_t i = 0; i < l; ++i) {
        for (std::size_t j = i; j < l; ++j) {
            const double v = std::norm(inner(ensemble_.vector(i), ensemble_.vector(j)));
            g(i, j) = v;
            g(j, i) = v;
        }
    }
    const SymmetricEigen se = eig_symmetric(g);
    const double top = se.eigenvalues.empty() ? 0.0 : se.eigenvalues.front();
    for (std::size_t k = 0; k < se.eigenvalues.size(); ++k) {
        if (se.eigenvalues[k] > 1e-10 * top) {
            basis_.push_back(se.vectors[k]);
            inv_.push_back(1.0 / se.eigenvalues[k]);
        }
    }
}

std::vector<double> LiftedOperator::apply(const HermitianMatrix& x) const {
    return measure_lifted(ensemble_, x).values;
}

HermitianMatrix LiftedOperator::adjoint(std::span<const double> b) const {
    return phasekit::adjoint(ensemble_, b);
}

std::vector<double> LiftedOperator::gram_solve(std::span<const double> r) const {
    require_length(*this, r);
    std::vector<double> out(r.size(), 0.0);
    for (std::size_t k = 0; k < basis_.size(); ++k) {
        double c = 0.0;
        for (std::size_t i = 0; i < r.size(); ++i) c += basis_[k][i] * r[i];
        c *= inv_[k];
        for (std::size_t i = 0; i < r.size(); ++i) out[i] += c * basis_[k][i];
    }
    return out;
}

std::vector<double> LiftedOperator::range_project(std::span<const double> b) const {
    require_length(*this, b);
    std::vector<double> out(b.size(), 0.0);
    for (const auto& u : basis_) {
        double c = 0.0;
        for (std::size_t i = 0; i < b.size(); ++i) c += u[i] * b[i];
        for (std::size_t i = 0; i < b.size(); ++i) out[i] += c * u[i];
    }
    return out;
}

std::vector<double> LiftedOperator::ball_correction(std::span<const double> r, double radius) const {
    require_length(*this, r);
    const std::size_t k = basis_.size();
    std::vector<double> c(k), g(k);
    for (std::size_t j = 0; j < k; ++j) {
        double d = 0.0;
        for (std::size_t i = 0; i < r.size(); ++i) d += basis_[j][i] * r[i];
        c[j] = d;
        g[j] = 1.0 / inv_[j];
    }
    auto excess = [&](double mu) {
        double s = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            const double t = c[j] / (1.0 + mu * g[j]);
            s += t * t;
        }
        return std::sqrt(s) - radius;
    };
    double mu = 0.0;
    if (excess(0.0) > 0.0) {
        double lo = 0.0;
        double hi = g.empty() ? 1.0 : 1.0 / *std::max_element(g.begin(), g.end());
        while (excess(hi) > 0.0 && hi < 1e300) {
            lo = hi;
            hi *= 2.0;
        }
        for (int it = 0; it < 200 && hi - lo > 1e-16 * hi; ++it) {
            const double mid = 0.5 * (lo + hi);
            (excess(mid) > 0.0 ? lo : hi) = mid;
        }
        mu = hi;
    }
    std::vector<double> w(r.size(), 0.0);
    for (std::size_t j = 0; j < k; ++j) {
        const double a = mu * c[j] / (1.0 + mu * g[j]);
        for (std::size_t i = 0; i < r.size(); ++i) w[i] += a * basis_[j][i];
    }
    return w;
}

void SdpConfig::validate() const {
    if (max_iter < 1) throw std::invalid_argument("sdp: max_iter must be at least 1");
    if (!(tol > 0.0)) throw std::invalid_argument("sdp: tol must be positive");
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
        throw std::invalid_argument("sdp: epsilon must be finite and nonnegative");
    }
    if (!(trace_weight >= 0.0) || !std::isfinite(trace_weight)) {
        throw std::invalid_argument("sdp: trace_weight must be finite and nonnegative");
    }
}

double noise_radius(std::size_t l, double sigma_nu2) { return static_cast<double>(l) * sigma_nu2; }

HermitianMatrix project_affine(const LiftedOperator& op, const HermitianMatrix& x,
                               std::span<const double> b, double epsilon) {
    require_length(op, b);
    std::vector<double> ax = op.apply(x);
    std::vector<double> r(b.size());
    if (epsilon == 0.0) {
        for (std::size_t i = 0; i < b.size(); ++i) r[i] = ax[i] - b[i];
    } else {
        // A(X) always lies in range(A), so ||A(X) - b||^2 splits into the
        // in-range part and the fixed out-of-range part of b.
        const std::vector<double> pb = op.range_project(b);
        double out2 = 0.0;
        for (std::size_t i = 0; i < b.size(); ++i) out2 += (b[i] - pb[i]) * (b[i] - pb[i]);
        const double eps_eff = std::sqrt(std::max(epsilon * epsilon - out2, 0.0));
        for (std::size_t i = 0; i < b.size(); ++i) r[i] = ax[i] - pb[i];
        if (norm2(r) <= eps_eff) return x;
        if (eps_eff > 0.0) return x - op.adjoint(op.ball_correction(r, eps_eff));
    }
    return x - op.adjoint(op.gram_solve(r));
}

double constraint_residual(const LiftedOperator& op, const HermitianMatrix& x,
                           std::span<const double> b, double epsilon) {
    require_length(op, b);
    const std::vector<double> ax = op.apply(x);
    double s = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i) s += (ax[i] - b[i]) * (ax[i] - b[i]);
    return std::max(std::sqrt(s) - epsilon, 0.0);
}

SdpResult solve_phaselift(const LiftedOperator& op, const IntensityVector& b, const SdpConfig& cfg,
                          const std::optional<HermitianMatrix>& start) {
    cfg.validate();
    require_length(op, b.values);
    for (double v : b.values) {
        if (!std::isfinite(v)) throw std::invalid_argument("sdp: non-finite measurement");
    }
    const std::size_t n = op.dim();
    const std::span<const double> bs(b.values);

    HermitianMatrix z = start ? *start : (1.0 / static_cast<double>(op.size())) * op.adjoint(bs);
    if (z.dim() != n) throw DimensionError("sdp: start matrix size does not match N");
    const HermitianMatrix shift = cfg.trace_weight * HermitianMatrix::identity(n);
    const double target = std::max(1e-9 * norm2(bs), 1e-3 * cfg.epsilon);

    SdpResult res;
    HermitianMatrix x_prev;
    bool have_prev = false;
    for (std::size_t it = 1; it <= cfg.max_iter; ++it) {
        HermitianMatrix x = project_psd(cfg.trace_weight > 0.0 ? z - shift : z);
        HermitianMatrix z_next;
        if (cfg.algorithm == SdpAlgorithm::DouglasRachford) {
            const HermitianMatrix r = project_affine(op, 2.0 * x - z, bs, cfg.epsilon);
            z_next = z + r - x;
        } else {
            z_next = project_affine(op, x, bs, cfg.epsilon);
        }
        if (cfg.record_steps) res.steps.push_back((z_next - z).frobenius_norm());
        z = std::move(z_next);

        res.iterations = it;
        const double xn = x.frobenius_norm();
        const double change = have_prev ? (x - x_prev).frobenius_norm() / std::max(xn, 1e-300)
                                        : std::numeric_limits<double>::infinity();
        x_prev = std::move(x);
        have_prev = true;
        if (change < cfg.tol) {
            res.residual = constraint_residual(op, x_prev, bs, cfg.epsilon);
            if (res.residual <= target) {
                res.converged = true;
                break;
            }
        }
    }
    res.X = std::move(x_prev);
    if (!res.converged) res.residual = constraint_residual(op, res.X, bs, cfg.epsilon);

    const auto ed = eig_hermitian(res.X);
    const double l1 = ed.eigenvalues[0];
    res.x_hat = std::sqrt(std::max(l1, 0.0)) * ed.eigenvectors[0];
    res.rank1_gap = (l1 > 0.0 && n > 1) ? std::max(ed.eigenvalues[1], 0.0) / l1 : 0.0;
    return res;
}

SdpResult solve_phaselift(const Ensemble& ensemble, const IntensityVector& b, const SdpConfig& cfg) {
    const LiftedOperator op(ensemble);
    return solve_phaselift(op, b, cfg);
}

}  // namespace phasekit
