// SPDX-License-Identifier: Apache-2.0
//
// Lifted (PhaseLift-style) recovery: find X >= 0 with A(X) = b, or with
// ||A(X) - b|| <= epsilon, then read off the leading eigenvector.

#pragma once

#include <optional>
#include <vector>

#include "phasekit/measurements.hpp"

namespace phasekit {

/// Lifted map A(X)[l] = <X, v_l v_l^*> with a cached pseudo-inverse of the
/// Gram matrix G = A A^* (G[l,k] = |<v_l, v_k>|^2). Eigenvalues of G below
/// 1e-10 * lambda_max are dropped.
class LiftedOperator {
public:
    explicit LiftedOperator(Ensemble ensemble);

    const Ensemble& ensemble() const noexcept { return ensemble_; }
    std::size_t dim() const noexcept { return ensemble_.dim(); }
    std::size_t size() const noexcept { return ensemble_.size(); }
    std::size_t gram_rank() const noexcept { return inv_.size(); }

    std::vector<double> apply(const HermitianMatrix& x) const;
    HermitianMatrix adjoint(std::span<const double> b) const;
    /// G^+ r
    std::vector<double> gram_solve(std::span<const double> r) const;
    /// Orthogonal projection of b onto range(A) = range(G).
    std::vector<double> range_project(std::span<const double> b) const;
    /// For r in range(A) with ||r|| > radius: the w minimizing ||A^* w||_F
    /// subject to ||r - G w|| <= radius, i.e. w = mu (I + mu G)^{-1} r with
    /// mu solving ||(I + mu G)^{-1} r|| = radius.
    std::vector<double> ball_correction(std::span<const double> r, double radius) const;

private:
    Ensemble ensemble_;
    std::vector<std::vector<double>> basis_;  // kept eigenvectors of G
    std::vector<double> inv_;                 // their inverse eigenvalues
};

enum class SdpAlgorithm { DouglasRachford, AlternatingProjections };

struct SdpConfig {
    std::size_t max_iter = 5000;
    double tol = 1e-7;
    double epsilon = 0.0;
    double trace_weight = 0.0;
    SdpAlgorithm algorithm = SdpAlgorithm::DouglasRachford;
    /// Keep ||z_{k+1} - z_k||_F per iteration.
    bool record_steps = false;

    void validate() const;
};

struct SdpResult {
    HermitianMatrix X;
    ComplexVector x_hat;
    std::size_t iterations = 0;
    double residual = 0.0;
    bool converged = false;
    double rank1_gap = 0.0;
    std::vector<double> steps;
};

/// Frobenius projection onto {X : ||A(X) - b|| <= epsilon}. With epsilon = 0
/// this is X - A^*(G^+(A(X) - b)). The part of b outside range(A) is
/// unreachable and counts against the radius.
HermitianMatrix project_affine(const LiftedOperator& op, const HermitianMatrix& x,
                               std::span<const double> b, double epsilon);

/// ||A(X) - b|| for epsilon = 0, otherwise its excess over epsilon.
double constraint_residual(const LiftedOperator& op, const HermitianMatrix& x,
                           std::span<const double> b, double epsilon);

/// Default start is A^*(b) / L.
SdpResult solve_phaselift(const LiftedOperator& op, const IntensityVector& b, const SdpConfig& cfg,
                          const std::optional<HermitianMatrix>& start = std::nullopt);
SdpResult solve_phaselift(const Ensemble& ensemble, const IntensityVector& b, const SdpConfig& cfg);

/// Noise-ball radius L * sigma_nu2.
double noise_radius(std::size_t l, double sigma_nu2);

}  // namespace phasekit
