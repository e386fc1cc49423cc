// SPDX-License-Identifier: Apache-2.0
//
// Counter-based random numbers. The generator is Philox4x32-10 keyed by the
// 64-bit seed, with the 128-bit counter split into a running block index
// (low half) and the stream id (high half). Any (seed, stream) pair yields
// a fixed sequence on every platform; distinct streams never share blocks.

#pragma once

#include <array>
#include <cstdint>

#include "phasekit/numerics.hpp"

namespace phasekit {

class Rng {
public:
    Rng(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream() const noexcept { return stream_; }

    std::uint32_t next_u32();
    std::uint64_t next_u64();
    /// Uniform on the open interval (0, 1).
    double uniform();
    /// Standard normal (Box-Muller, second variate cached).
    double normal();

private:
    void refill();

    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    std::array<std::uint32_t, 4> buf_{};
    unsigned pos_ = 4;
    double cached_normal_ = 0.0;
    bool has_cached_ = false;
};

/// One Philox4x32-10 block, exposed for known-answer tests.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                            std::array<std::uint32_t, 2> key);

/// n entries with real and imaginary parts drawn i.i.d. N(0, variance / 2),
/// so E|x[k]|^2 = variance.
ComplexVector gaussian_complex(Rng& rng, std::size_t n, double variance);

}  // namespace phasekit
