// SPDX-License-Identifier: Apache-2.0
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "phasekit/recovery_algebraic.hpp"
#include "test_support.hpp"

using namespace phasekit;

namespace {

ComplexVector random_in_set(Rng& rng, EnsembleKind kind, std::size_t n) {
    for (;;) {
        auto x = gaussian_complex(rng, n, 1.0);
        if (in_recoverable_set(kind, x)) return x;
    }
}

BlockEstimate exact_block(cplx a, cplx b, std::size_t idx) {
    return block_reconstruct(frame_measure(ComplexVector{a, b}), idx);
}

// Oracle for aligned error: scan the unit circle.
double grid_aligned_error(const ComplexVector& x, const ComplexVector& y) {
    double best = 1e300;
    for (int k = 0; k < 10000; ++k) {
        const cplx c = std::polar(1.0, 2.0 * std::numbers::pi * k / 10000.0);
        best = std::min(best, (x - c * y).norm_squared());
    }
    return best;
}

}  // namespace

TEST_CASE("aligned_error") {
    const ComplexVector x{1.0, cplx{0, 1}};
    CHECK(aligned_error(x, x) == doctest::Approx(0.0));
    CHECK(aligned_error(x, ComplexVector{cplx{0, 1}, -1.0}) < 1e-30);
    CHECK(aligned_error(ComplexVector{1.0, 0.0}, ComplexVector{0.0, 1.0}) == doctest::Approx(2.0));
    CHECK(grid_aligned_error(ComplexVector{1.0, 0.0}, ComplexVector{0.0, 1.0}) == doctest::Approx(2.0));
    Rng rng(30, 0);
    for (int t = 0; t < 20; ++t) {
        const auto a = gaussian_complex(rng, 4, 1.0);
        const auto b = gaussian_complex(rng, 4, 1.0);
        const double e = aligned_error(a, b);
        const double closed = a.norm_squared() + b.norm_squared() - 2 * std::abs(inner(a, b));
        CHECK(e == doctest::Approx(closed).epsilon(1e-10));
        CHECK(e <= grid_aligned_error(a, b) + 1e-12);
        CHECK(e >= grid_aligned_error(a, b) - 1e-6);
    }
    CHECK_THROWS_AS(aligned_error(ComplexVector(2), ComplexVector(3)), DimensionError);
}

TEST_CASE("block_reconstruct") {
    const auto z = block_reconstruct({0, 0, 0, 0});
    CHECK(z.degenerate);
    CHECK(z.vec.norm() == 0.0);
    const auto e = exact_block(1.0, 0.0, 0);
    CHECK_FALSE(e.degenerate);
    CHECK(e.vec.norm() == doctest::Approx(1.0));
    CHECK(testing::same_up_to_phase(e.vec, ComplexVector{1.0, 0.0}, 1e-12));
    const auto neg = block_reconstruct({-1, -1, -1, -1});
    CHECK(neg.degenerate);
    CHECK(neg.lambda_max < 0.0);
    Rng rng(31, 0);
    for (int t = 0; t < 100; ++t) {
        FrameCoefficients b{};
        for (auto& v : b) v = rng.normal();
        const auto est = block_reconstruct(b);
        CHECK(est.degenerate == (est.vec.norm() == 0.0));
        CHECK(std::abs(est.vec.norm_squared() - std::max(est.lambda_max, 0.0)) <= 1e-12 * std::max(1.0, std::abs(est.lambda_max)));
    }
}

TEST_CASE("stitch_phi") {
    const ComplexVector x{1.0, 1.0, 1.0, 1.0};
    std::vector<BlockEstimate> blocks;
    for (std::size_t k = 0; k < 3; ++k) blocks.push_back(exact_block(x[k], x[k + 1], k));
    CHECK(aligned_error(x, stitch_phi(blocks)) < 1e-20);
    blocks[1].vec *= std::polar(1.0, std::numbers::pi / 3);
    CHECK(aligned_error(x, stitch_phi(blocks)) < 1e-20);

    const auto single = exact_block(cplx{0.3, 0.4}, cplx{-1, 2}, 0);
    const auto s = stitch_phi({single});
    CHECK(aligned_error(single.vec, s) < 1e-24);

    // Broken chain: a degenerate block in the middle.
    std::vector<BlockEstimate> broken_blocks;
    for (std::size_t k = 0; k < 3; ++k) broken_blocks.push_back(exact_block(x[k], x[k + 1], k));
    broken_blocks[1] = block_reconstruct({0, 0, 0, 0}, 1);
    std::vector<std::size_t> broken;
    const auto out = stitch_phi(broken_blocks, &broken);
    CHECK(broken == std::vector<std::size_t>{1, 2});
    CHECK(std::isfinite(out.norm()));
}

TEST_CASE("stitch_psi") {
    Rng rng(32, 0);
    const auto x = random_in_set(rng, EnsembleKind::Psi, 6);
    std::vector<BlockEstimate> blocks;
    for (std::size_t k = 0; k + 1 < 6; ++k) blocks.push_back(exact_block(x[0], x[k + 1], k));
    CHECK(aligned_error(x, stitch_psi(blocks)) < 1e-20 * x.norm_squared() + 1e-28);

    // Blocks already hub-real: rotation is the identity.
    const ComplexVector y{2.0, cplx{1, 1}, cplx{0, -3}};
    std::vector<BlockEstimate> real_hub;
    for (std::size_t k = 0; k < 2; ++k) {
        BlockEstimate b;
        b.index = k;
        b.degenerate = false;
        b.vec = ComplexVector{y[0], y[k + 1]};
        real_hub.push_back(b);
    }
    CHECK(stitch_psi(real_hub) == y);

    // One degenerate block only zeroes its own entry.
    blocks[2] = block_reconstruct({0, 0, 0, 0}, 2);
    const auto out = stitch_psi(blocks);
    CHECK(out[3] == cplx{0, 0});
    const cplx c = std::conj(x[0]) / std::abs(x[0]);
    for (std::size_t k : {0u, 1u, 2u, 4u, 5u}) CHECK(std::abs(out[k] - c * x[k]) < 1e-12);
}

TEST_CASE("recover examples") {
    const auto e1 = unit_vector(4, 0);
    const auto r = recover(EnsembleKind::Psi, measure(build_ensemble(EnsembleKind::Psi, 4), e1), 4);
    CHECK(aligned_error(e1, r.x_hat) < 1e-24);
    CHECK(r.x_hat[0].imag() == 0.0);
    CHECK(r.x_hat[0].real() >= 0.0);

    const ComplexVector ones{1.0, 1.0, 1.0};
    const auto rp = recover(EnsembleKind::Phi, measure(build_ensemble(EnsembleKind::Phi, 3), ones), 3);
    CHECK(aligned_error(ones, rp.x_hat) <= 1e-18 * ones.norm_squared());
    CHECK(rp.degenerate_count == 0);

    // Outside the set: still returns a report.
    const ComplexVector hole{1.0, 0.0, 1.0};
    const auto rh = recover(EnsembleKind::Phi, measure(build_ensemble(EnsembleKind::Phi, 3), hole), 3);
    CHECK(rh.x_hat.size() == 3);
    CHECK(std::isfinite(rh.x_hat.norm()));

    CHECK_THROWS_AS(recover(EnsembleKind::Phi, IntensityVector{std::vector<double>(7), {}}, 3), DimensionError);
    CHECK_THROWS_AS(recover(EnsembleKind::Psi, IntensityVector{std::vector<double>(8, -1.0), {}}, 3),
                    RecoveryError);
}

TEST_CASE("noiseless exactness and phase equivariance") {
    Rng rng(33, 0);
    for (std::size_t n : {2u, 3u, 8u, 64u}) {
        for (auto kind : {EnsembleKind::Phi, EnsembleKind::Psi}) {
            const auto e = build_ensemble(kind, n);
            for (int t = 0; t < 20; ++t) {
                const auto x = random_in_set(rng, kind, n);
                const auto rep = recover(kind, measure(e, x), n);
                CHECK(aligned_error(x, rep.x_hat) <= 1e-18 * x.norm_squared());
                CHECK(rep.degenerate_count == 0);
                if (kind == EnsembleKind::Psi || std::abs(rep.blocks[0].vec[0]) > 0.0) {
                    CHECK(rep.x_hat[0].imag() == 0.0);
                    CHECK(rep.x_hat[0].real() >= 0.0);
                }
            }
        }
    }
    const auto x = random_in_set(rng, EnsembleKind::Phi, 10);
    const auto e = build_ensemble(EnsembleKind::Phi, 10);
    const auto b1 = measure(e, x);
    const auto b2 = measure(e, std::polar(1.0, 1.234) * x);
    const auto r1 = recover(EnsembleKind::Phi, b1, 10);
    const auto r2 = recover(EnsembleKind::Phi, b2, 10);
    if (b1.values == b2.values) CHECK(r1.x_hat == r2.x_hat);
    CHECK(aligned_error(r1.x_hat, r2.x_hat) < 1e-24 * x.norm_squared());
}

TEST_CASE("frame noise matrix bounds") {
    // B[m, n] = 6 on the diagonal minus the all-ones matrix; lambda_min from
    // the real Jacobi solver is the oracle.
    SymmetricMatrix bm(4);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) bm(i, j) = (i == j ? 6.0 : 0.0) - 1.0;
    const double lmin = eig_symmetric(bm).eigenvalues.back();
    CHECK(lmin == doctest::Approx(2.0));
    Rng rng(34, 0);
    for (int t = 0; t < 10000; ++t) {
        FrameCoefficients nu{};
        double nn = 0.0;
        for (auto& v : nu) {
            v = rng.normal();
            nn += v * v;
        }
        const double dq = reconstruct_rank1(nu).frobenius_norm();
        CHECK(dq <= std::sqrt(1.5 * nn) * (1 + 1e-12));
        CHECK(dq * dq >= lmin / 4.0 * nn * (1 - 1e-12));
    }
}

TEST_CASE("eigen-perturbation regimes") {
    Rng rng(35, 0);
    int high = 0, low = 0;
    for (int t = 0; t < 10000; ++t) {
        const auto x = gaussian_complex(rng, 2, 1.0);
        auto d = testing::random_hermitian(rng, 2);
        d *= std::pow(10.0, -3.0 + 3.5 * rng.uniform());
        const double dn = d.spectral_norm();
        const auto q = HermitianMatrix::outer(x) + d;
        const auto ed = eig2_hermitian(q);
        const ComplexVector est = std::sqrt(std::max(ed.eigenvalues[0], 0.0)) * ed.eigenvectors[0];
        const double err = std::sqrt(aligned_error(x, est));
        if (x.norm_squared() >= 3.0 * dn) {
            ++high;
            CHECK(err <= 2.0 * dn / x.norm() * (1 + 1e-9));
        } else {
            ++low;
            CHECK(err <= std::sqrt(7.0 * dn) * (1 + 1e-9));
        }
    }
    CHECK(high > 100);
    CHECK(low > 100);
}
