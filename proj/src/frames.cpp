// SPDX-License-Identifier: Apache-2.0

#include "phasekit/frames.hpp"

#include <cmath>
#include <numbers>

namespace phasekit {

double frame_alpha() { return std::sqrt((1.0 - 1.0 / std::sqrt(3.0)) / 2.0); }

cplx frame_beta() {
    return std::polar(std::sqrt((1.0 + 1.0 / std::sqrt(3.0)) / 2.0), 5.0 * std::numbers::pi / 4.0);
}

namespace {

TightFrame2 make_frame() {
    const cplx al = frame_alpha();
    const cplx be = frame_beta();
    TightFrame2 f;
    f.a = {ComplexVector{al, be}, ComplexVector{be, al}, ComplexVector{al, -be},
           ComplexVector{-be, al}};
    const HermitianMatrix shift = kDualShift * HermitianMatrix::identity(kFrameDim);
    for (std::size_t m = 0; m < kFrameSize; ++m) {
        f.A[m] = HermitianMatrix::outer(f.a[m]);
        f.A_dual[m] = f.A[m] - shift;
    }
    return f;
}

void require_block(const HermitianMatrix& q) {
    if (q.dim() != kFrameDim) throw DimensionError("frame: expected a 2x2 matrix");
}

}  // namespace

const TightFrame2& standard_frame() {
    static const TightFrame2 frame = make_frame();
    return frame;
}

FrameCoefficients frame_measure(const ComplexVector& x, const TightFrame2& frame) {
    if (x.size() != kFrameDim) throw DimensionError("frame_measure: expected a 2-vector");
    FrameCoefficients b{};
    for (std::size_t m = 0; m < kFrameSize; ++m) b[m] = std::norm(inner(x, frame.a[m]));
    return b;
}

HermitianMatrix reconstruct_rank1(const FrameCoefficients& b, const TightFrame2& frame) {
    HermitianMatrix q(kFrameDim);
    for (std::size_t m = 0; m < kFrameSize; ++m) {
        if (!std::isfinite(b[m])) throw std::invalid_argument("reconstruct_rank1: non-finite input");
        q += (kReconScale * b[m]) * frame.A_dual[m];
    }
    return q;
}

FrameCoefficients dual_coefficients(const HermitianMatrix& q, const TightFrame2& frame) {
    require_block(q);
    FrameCoefficients g{};
    for (std::size_t m = 0; m < kFrameSize; ++m) g[m] = hs_inner(q, frame.A_dual[m]);
    return g;
}

}  // namespace phasekit
