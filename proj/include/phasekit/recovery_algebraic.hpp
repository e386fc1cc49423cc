// SPDX-License-Identifier: Apache-2.0
//
// O(N) algebraic recovery for the deterministic ensembles. Each group of
// four intensities determines a 2x2 rank-one matrix through the frame
// identity; its leading eigenpair gives the block up to phase, and blocks
// are stitched along the chain (Phi) or around the hub x[0] (Psi).

#pragma once

#include <stdexcept>
#include <vector>

#include "phasekit/frames.hpp"
#include "phasekit/measurements.hpp"

namespace phasekit {

/// Every block was degenerate; nothing can be recovered.
class RecoveryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct BlockEstimate {
    std::size_t index = 0;
    HermitianMatrix Q{2};
    double lambda_max = 0.0;
    ComplexVector vec{0.0, 0.0};  // sqrt(max(lambda_max, 0)) u
    bool degenerate = true;
};

struct RecoveryReport {
    EnsembleKind kind = EnsembleKind::Phi;
    ComplexVector x_hat;
    std::vector<BlockEstimate> blocks;
    std::size_t degenerate_count = 0;
    /// Phi: blocks whose phase offset could not be transferred and defaulted
    /// to zero. Psi: blocks with a vanishing hub entry.
    std::vector<std::size_t> broken_links;
};

BlockEstimate block_reconstruct(const FrameCoefficients& b, std::size_t index = 0);

/// Forward phase propagation over blocks (x[n], x[n+1]), n = 0..N-2.
/// Overlapping entries are averaged after alignment. The result is rotated
/// so that block 0 carries phase zero.
ComplexVector stitch_phi(const std::vector<BlockEstimate>& blocks,
                         std::vector<std::size_t>* broken = nullptr);

/// Hub alignment over blocks (x[0], x[n+1]), n = 0..N-2. Each block is
/// rotated so its hub entry is real nonnegative; x_hat[0] is the mean hub.
ComplexVector stitch_psi(const std::vector<BlockEstimate>& blocks,
                         std::vector<std::size_t>* broken = nullptr);

/// Throws DimensionError on length mismatch and RecoveryError if every
/// block is degenerate.
RecoveryReport recover(EnsembleKind kind, const IntensityVector& b, std::size_t n);

/// min over |c| = 1 of ||x - c x_hat||^2 = ||x||^2 + ||x_hat||^2 - 2 |<x, x_hat>|.
double aligned_error(const ComplexVector& x, const ComplexVector& x_hat);

}  // namespace phasekit
