// SPDX-License-Identifier: Apache-2.0

#include "phasekit/recovery_algebraic.hpp"

#include <algorithm>
#include <cmath>

namespace phasekit {

namespace {

cplx unit_phase(cplx z) {
    const double a = std::abs(z);
    return a > 0.0 ? z / a : cplx{1.0, 0.0};
}

}  // namespace

BlockEstimate block_reconstruct(const FrameCoefficients& b, std::size_t index) {
    BlockEstimate est;
    est.index = index;
    est.Q = reconstruct_rank1(b);
    const auto ed = eig2_hermitian(est.Q);
    est.lambda_max = ed.eigenvalues[0];
    est.degenerate = !(est.lambda_max > 0.0);
    if (est.degenerate) {
        est.vec = ComplexVector{0.0, 0.0};
    } else {
        est.vec = std::sqrt(est.lambda_max) * ed.eigenvectors[0];
    }
    return est;
}

ComplexVector stitch_phi(const std::vector<BlockEstimate>& blocks, std::vector<std::size_t>* broken) {
    if (blocks.empty()) throw DimensionError("stitch_phi: no blocks");
    const std::size_t n = blocks.size() + 1;

    std::vector<ComplexVector> aligned;
    aligned.reserve(blocks.size());
    for (std::size_t k = 0; k < blocks.size(); ++k) {
        const auto& blk = blocks[k];
        if (k == 0) {
            ComplexVector v = std::conj(unit_phase(blk.vec[0])) * blk.vec;
            v[0] = std::abs(blk.vec[0]);
            aligned.push_back(std::move(v));
            continue;
        }
        const cplx prev = aligned[k - 1][1];
        const cplx cur = blk.vec[0];
        cplx rot{1.0, 0.0};
        if (blk.degenerate || blocks[k - 1].degenerate || prev == cplx{} || cur == cplx{}) {
            if (broken) broken->push_back(k);
        } else {
            rot = unit_phase(prev) * std::conj(unit_phase(cur));
        }
        aligned.push_back(rot * blk.vec);
    }

    ComplexVector x(n);
    std::vector<unsigned> count(n, 0);
    for (std::size_t k = 0; k < blocks.size(); ++k) {
        if (blocks[k].degenerate) continue;
        x[k] += aligned[k][0];
        x[k + 1] += aligned[k][1];
        ++count[k];
        ++count[k + 1];
    }
    for (std::size_t k = 0; k < n; ++k) {
        if (count[k] > 1) x[k] /= static_cast<double>(count[k]);
    }
    return x;
}

ComplexVector stitch_psi(const std::vector<BlockEstimate>& blocks, std::vector<std::size_t>* broken) {
    if (blocks.empty()) throw DimensionError("stitch_psi: no blocks");
    const std::size_t n = blocks.size() + 1;
    ComplexVector x(n);
    cplx hub{0.0, 0.0};
    std::size_t used = 0;
    for (std::size_t k = 0; k < blocks.size(); ++k) {
        const auto& blk = blocks[k];
        if (blk.degenerate) continue;
        if (blk.vec[0] == cplx{}) {
            if (broken) broken->push_back(k);
        }
        const cplx rot = std::conj(unit_phase(blk.vec[0]));
        hub += std::abs(blk.vec[0]);
        x[k + 1] = rot * blk.vec[1];
        ++used;
    }
    if (used > 0) x[0] = hub / static_cast<double>(used);
    return x;
}

RecoveryReport recover(EnsembleKind kind, const IntensityVector& b, std::size_t n) {
    if (kind == EnsembleKind::Random) {
        throw std::invalid_argument("recover: algebraic recovery needs a deterministic ensemble");
    }
    if (n < 2) throw DimensionError("recover: N must be at least 2");
    if (b.size() != deterministic_count(n)) {
        throw DimensionError("recover: expected " + std::to_string(deterministic_count(n)) +
                             " measurements, got " + std::to_string(b.size()));
    }
    RecoveryReport rep;
    rep.kind = kind;
    rep.blocks.reserve(n - 1);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        FrameCoefficients q{};
        for (std::size_t m = 0; m < kFrameSize; ++m) q[m] = b.values[Ensemble::index(m, k)];
        rep.blocks.push_back(block_reconstruct(q, k));
        if (rep.blocks.back().degenerate) ++rep.degenerate_count;
    }
    if (rep.degenerate_count == rep.blocks.size()) {
        throw RecoveryError("recover: every block is degenerate (lambda_max <= 0)");
    }
    rep.x_hat = kind == EnsembleKind::Phi ? stitch_phi(rep.blocks, &rep.broken_links)
                                          : stitch_psi(rep.blocks, &rep.broken_links);
    return rep;
}

double aligned_error(const ComplexVector& x, const ComplexVector& x_hat) {
    if (x.size() != x_hat.size()) throw DimensionError("aligned_error: dimension mismatch");
    // Equal to ||x||^2 + ||x_hat||^2 - 2|<x, x_hat>|, but summed directly at
    // the optimal phase so tiny errors are not lost to cancellation.
    const cplx c = unit_phase(inner(x, x_hat));
    double e = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) e += std::norm(x[k] - c * x_hat[k]);
    return e;
}

}  // namespace phasekit
