// SPDX-License-Identifier: Apache-2.0

#include "phasekit/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace phasekit {

namespace {

constexpr std::uint32_t kM0 = 0xD2511F53u;
constexpr std::uint32_t kM1 = 0xCD9E8D57u;
constexpr std::uint32_t kW0 = 0x9E3779B9u;
constexpr std::uint32_t kW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> c,
                                            std::array<std::uint32_t, 2> k) {
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kM0, c[0], hi0, lo0);
        mulhilo(kM1, c[2], hi1, lo1);
        c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
        k[0] += kW0;
        k[1] += kW1;
    }
    return c;
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}

void Rng::refill() {
    const std::array<std::uint32_t, 4> ctr{
        static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
        static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)};
    const std::array<std::uint32_t, 2> key{static_cast<std::uint32_t>(seed_),
                                           static_cast<std::uint32_t>(seed_ >> 32)};
    buf_ = philox4x32_10(ctr, key);
    ++block_;
    pos_ = 0;
}

std::uint32_t Rng::next_u32() {
    if (pos_ >= 4) refill();
    return buf_[pos_++];
}

std::uint64_t Rng::next_u64() {
    const std::uint64_t lo = next_u32();
    const std::uint64_t hi = next_u32();
    return (hi << 32) | lo;
}

double Rng::uniform() {
    // 53 random bits, offset by half an ulp so 0 and 1 are never returned.
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::normal() {
    if (has_cached_) {
        has_cached_ = false;
        return cached_normal_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    cached_normal_ = r * std::sin(t);
    has_cached_ = true;
    return r * std::cos(t);
}

ComplexVector gaussian_complex(Rng& rng, std::size_t n, double variance) {
    if (!(variance > 0.0) || !std::isfinite(variance)) {
        throw std::invalid_argument("gaussian_complex: variance must be positive");
    }
    const double s = std::sqrt(variance / 2.0);
    ComplexVector x(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double re = rng.normal();
        const double im = rng.normal();
        x[k] = cplx{s * re, s * im};
    }
    return x;
}

}  // namespace phasekit
