// SPDX-License-Identifier: Apache-2.0
//
// The uniform 4/2-tight frame in C^2 and its reconstruction identities.

#pragma once

#include <array>

#include "phasekit/numerics.hpp"

namespace phasekit {

/// Dimension K of the frame space.
inline constexpr std::size_t kFrameDim = 2;
/// Number M of frame vectors.
inline constexpr std::size_t kFrameSize = 4;
/// (K + 1) / K, the prefactor of both reconstruction identities.
inline constexpr double kReconScale = static_cast<double>(kFrameDim + 1) / kFrameDim;
/// 1 / (K + 1), the identity shift of the dual system.
inline constexpr double kDualShift = 1.0 / static_cast<double>(kFrameDim + 1);

using FrameCoefficients = std::array<double, kFrameSize>;

struct TightFrame2 {
    std::array<ComplexVector, kFrameSize> a;       // unit vectors a_m
    std::array<HermitianMatrix, kFrameSize> A;     // a_m a_m^*
    std::array<HermitianMatrix, kFrameSize> A_dual; // A_m - I/3
};

/// alpha = sqrt((1 - 1/sqrt 3) / 2)
double frame_alpha();
/// beta = exp(i 5 pi / 4) sqrt((1 + 1/sqrt 3) / 2)
cplx frame_beta();

/// a1 = (alpha, beta), a2 = (beta, alpha), a3 = (alpha, -beta), a4 = (-beta, alpha).
const TightFrame2& standard_frame();

/// b_m = |<x, a_m>|^2 for x in C^2.
FrameCoefficients frame_measure(const ComplexVector& x, const TightFrame2& frame = standard_frame());

/// Q = (3/2) sum_m b_m (A_m - I/3). Exact for consistent b, total otherwise.
HermitianMatrix reconstruct_rank1(const FrameCoefficients& b,
                                  const TightFrame2& frame = standard_frame());

/// gamma_m = <Q, A_m - I/3>, so that Q = (3/2) sum_m gamma_m A_m.
FrameCoefficients dual_coefficients(const HermitianMatrix& q,
                                    const TightFrame2& frame = standard_frame());

}  // namespace phasekit
