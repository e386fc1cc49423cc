// SPDX-License-Identifier: Apache-2.0
//
// Measurement ensembles, the quadratic and lifted measurement maps, the
// intensity noise model, and the masked-DFT realization of both
// deterministic designs.
//
// Deterministic ensembles hold 4(N-1) vectors ordered l = 4 n + m with
// zero-based block n in [0, N-2] and frame index m in [0, 3]:
//   Phi: phi_{m,n} = a_m[0] e_n + a_m[1] e_{n+1}
//   Psi: psi_{m,n} = a_m[0] e_0 + a_m[1] e_{n+1}

#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "phasekit/numerics.hpp"
#include "phasekit/rng.hpp"

namespace phasekit {

enum class EnsembleKind { Phi, Psi, Random };

std::string_view to_string(EnsembleKind kind);
/// Accepts "phi", "psi", "random" (case-sensitive).
EnsembleKind parse_kind(std::string_view text);

class Ensemble {
public:
    /// Validates dimensions: every vector has length n; deterministic kinds
    /// need exactly 4(n-1) vectors; random vectors must have unit norm.
    Ensemble(EnsembleKind kind, std::size_t n, std::vector<ComplexVector> vectors);

    EnsembleKind kind() const noexcept { return kind_; }
    std::size_t dim() const noexcept { return n_; }
    std::size_t size() const noexcept { return vectors_.size(); }

    const ComplexVector& vector(std::size_t l) const { return vectors_.at(l); }
    const std::vector<ComplexVector>& vectors() const noexcept { return vectors_; }
    /// Indices of the nonzero entries of vector l, ascending.
    const std::vector<std::size_t>& support(std::size_t l) const { return supports_.at(l); }

    /// Serial position of (frame index m, block n), both zero-based.
    static constexpr std::size_t index(std::size_t m, std::size_t n) noexcept { return 4 * n + m; }

private:
    EnsembleKind kind_;
    std::size_t n_;
    std::vector<ComplexVector> vectors_;
    std::vector<std::vector<std::size_t>> supports_;
};

/// Number of deterministic measurements 4(N-1).
constexpr std::size_t deterministic_count(std::size_t n) noexcept { return 4 * (n - 1); }

Ensemble build_ensemble(EnsembleKind kind, std::size_t n);
/// L unit-norm complex Gaussian directions in C^N.
Ensemble build_random_ensemble(Rng& rng, std::size_t n, std::size_t l);

struct IntensityVector {
    std::vector<double> values;
    std::optional<double> noise_variance;

    std::size_t size() const noexcept { return values.size(); }
};

/// b[l] = |<x, v_l>|^2
IntensityVector measure(const Ensemble& ensemble, const ComplexVector& x);
/// b[l] = <X, v_l v_l^*> = v_l^* X v_l
IntensityVector measure_lifted(const Ensemble& ensemble, const HermitianMatrix& x);
/// sum_l b[l] v_l v_l^*
HermitianMatrix adjoint(const Ensemble& ensemble, std::span<const double> b);
HermitianMatrix adjoint(const Ensemble& ensemble, const IntensityVector& b);

/// b + nu with nu[l] ~ N(0, sigma_nu2) drawn from rng in index order.
IntensityVector add_noise(const IntensityVector& b, double sigma_nu2, Rng& rng);

struct MaskSet {
    EnsembleKind kind;
    std::size_t n;
    std::array<ComplexVector, 4> masks;
};

/// Phi: p_m[t] = conj(a_m[0]) + conj(a_m[1]) exp(-2 pi i t / N)
/// Psi: p_m[t] = conj(a_m[0]) delta[t] + conj(a_m[1])
MaskSet build_masks(EnsembleKind kind, std::size_t n);

/// |dft(x .* p_m)[w]|^2 arranged as l = 4 w + m. Phi keeps w in [0, N-2]
/// (4(N-1) values, equal to measure(Phi_N, dft(x))); Psi keeps w in
/// [0, N-1] (4N values, equal to measure(Psi_{N+1}, psi_augment(x))).
IntensityVector mask_measure(const ComplexVector& x, const MaskSet& masks);

/// (x[0], dft(x)[0], ..., dft(x)[N-1]) in C^{N+1}.
ComplexVector psi_augment(const ComplexVector& x);

/// Phi: |x[n]| > mu for all interior n in [1, N-2]. Psi: |x[0]| > mu.
bool in_recoverable_set(EnsembleKind kind, const ComplexVector& x, double mu = 0.0);

}  // namespace phasekit
