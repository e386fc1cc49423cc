// SPDX-License-Identifier: Apache-2.0

#include "phasekit/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "phasekit/bench.hpp"
#include "phasekit/certificates.hpp"
#include "phasekit/frames.hpp"
#include "phasekit/recovery_sdp.hpp"

namespace phasekit {

VerifySuite parse_suite(std::string_view text) {
    if (text == "frames") return VerifySuite::Frames;
    if (text == "nullspace") return VerifySuite::Nullspace;
    if (text == "certificate") return VerifySuite::Certificate;
    if (text == "injectivity") return VerifySuite::Injectivity;
    if (text == "masks") return VerifySuite::Masks;
    if (text == "bounds") return VerifySuite::Bounds;
    throw std::invalid_argument("unknown suite '" + std::string(text) + "'");
}

std::string_view to_string(VerifySuite s) {
    switch (s) {
        case VerifySuite::Frames: return "frames";
        case VerifySuite::Nullspace: return "nullspace";
        case VerifySuite::Certificate: return "certificate";
        case VerifySuite::Injectivity: return "injectivity";
        case VerifySuite::Masks: return "masks";
        case VerifySuite::Bounds: return "bounds";
    }
    return "?";
}

namespace {

class Reporter {
public:
    explicit Reporter(std::ostream& out) : out_(out) {}

    void line(bool ok, const std::string& check, const std::string& params, const std::string& metric) {
        out_ << (ok ? "PASS " : "FAIL ") << check << ' ' << params << ' ' << metric << '\n';
        if (!ok) ++failures_;
    }

    std::size_t failures() const { return failures_; }

private:
    std::ostream& out_;
    std::size_t failures_ = 0;
};

std::string fmt(const char* key, double v) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%s=%.3e", key, v);
    return buf;
}

std::string params(const VerifyOptions& o, bool with_kind = true) {
    std::string s;
    if (with_kind) s += "kind=" + std::string(to_string(o.kind)) + " ";
    s += "n=" + std::to_string(o.n) + " trials=" + std::to_string(o.trials);
    return s;
}

ComplexVector draw_in_set(Rng& rng, EnsembleKind kind, std::size_t n) {
    for (;;) {
        ComplexVector x = gaussian_complex(rng, n, 1.0);
        if (in_recoverable_set(kind, x)) return x;
    }
}

double max_entry(const HermitianMatrix& m) {
    double v = 0.0;
    for (const auto& z : m.data()) v = std::max(v, std::abs(z));
    return v;
}

void suite_frames(const VerifyOptions& o, Rng& rng, Reporter& rep) {
    const auto& f = standard_frame();
    double unit = 0.0, gram = 0.0, dual_gram = 0.0;
    HermitianMatrix sum(2);
    for (std::size_t m = 0; m < kFrameSize; ++m) {
        unit = std::max(unit, std::abs(f.a[m].norm() - 1.0));
        sum += f.A[m];
        for (std::size_t k = 0; k < kFrameSize; ++k) {
            gram = std::max(gram, std::abs(std::norm(inner(f.a[m], f.a[k])) - (m == k ? 1.0 : 1.0 / 3.0)));
            dual_gram = std::max(dual_gram,
                                 std::abs(hs_inner(f.A_dual[m], f.A_dual[k]) - (m == k ? 5.0 / 9.0 : -1.0 / 9.0)));
        }
    }
    const double tight = max_entry(sum - 2.0 * HermitianMatrix::identity(2));
    rep.line(unit <= 1e-12, "frames.unit_norm", "", fmt("max_err", unit));
    rep.line(gram <= 1e-12, "frames.gram", "", fmt("max_err", gram));
    rep.line(dual_gram <= 1e-12, "frames.dual_gram", "", fmt("max_err", dual_gram));
    rep.line(tight <= 1e-12, "frames.tight", "", fmt("max_err", tight));
    double recon = 0.0, dual = 0.0;
    for (std::size_t t = 0; t < o.trials; ++t) {
        const ComplexVector x = gaussian_complex(rng, 2, 1.0);
        const HermitianMatrix xx = HermitianMatrix::outer(x);
        recon = std::max(recon, max_entry(reconstruct_rank1(frame_measure(x)) - xx) / xx.frobenius_norm());
        const HermitianMatrix q = HermitianMatrix::outer((1.0 / x.norm()) * x);
        const FrameCoefficients g = dual_coefficients(q);
        HermitianMatrix back(2);
        for (std::size_t m = 0; m < kFrameSize; ++m) back += (kReconScale * g[m]) * f.A[m];
        dual = std::max(dual, max_entry(back - q));
    }
    const std::string p = "trials=" + std::to_string(o.trials);
    rep.line(recon <= 1e-12, "frames.reconstruct", p, fmt("max_rel", recon));
    rep.line(dual <= 1e-12, "frames.dual_identity", p, fmt("max_err", dual));
}

void suite_nullspace(const VerifyOptions& o, Reporter& rep) {
    for (std::size_t n = 2; n <= o.n; ++n) {
        const auto basis = nullspace_basis(o.kind, n);
        const std::size_t expect = n * n - (3 * n - 2);
        const std::string p = "kind=" + std::string(to_string(o.kind)) + " n=" + std::to_string(n);
        rep.line(basis.size() == expect, "nullspace.dimension", p,
                 "dim=" + std::to_string(basis.size()) + " expected=" + std::to_string(expect));
        double worst = 0.0;
        for (const auto& z : basis) {
            for (std::size_t r = 0; r < n; ++r) {
                for (std::size_t c = 0; c < n; ++c) {
                    const bool seen = r == c || (o.kind == EnsembleKind::Phi ? (r + 1 == c || c + 1 == r)
                                                                             : (r == 0 || c == 0));
                    if (seen) worst = std::max(worst, std::abs(z(r, c)));
                }
            }
        }
        rep.line(worst <= 1e-10, "nullspace.pattern", p, fmt("max_entry", worst));
    }
}

void suite_certificate(const VerifyOptions& o, Rng& rng, Reporter& rep) {
    const LiftedOperator op(build_ensemble(o.kind, o.n));
    double range = 0.0, yx = 0.0, smallest = 0.0, second = 1e300;
    for (std::size_t t = 0; t < o.trials; ++t) {
        const ComplexVector x = draw_in_set(rng, o.kind, o.n);
        const Certificate c = build_certificate(o.kind, x);
        const double yf = c.Y.frobenius_norm();
        const HermitianMatrix proj = op.adjoint(op.gram_solve(op.apply(c.Y)));
        range = std::max(range, (proj - c.Y).frobenius_norm() / yf);
        yx = std::max(yx, c.Y.apply(x).norm() / (yf * x.norm()));
        const double top = c.spectrum.front();
        smallest = std::max(smallest, std::abs(c.spectrum.back()) / top);
        second = std::min(second, c.spectrum[c.spectrum.size() - 2] / top);
    }
    const std::string p = params(o);
    rep.line(range <= 1e-10, "certificate.range_adjoint", p, fmt("max_rel", range));
    rep.line(yx <= 1e-10, "certificate.Yx_zero", p, fmt("max_rel", yx));
    rep.line(smallest <= 1e-9 && second >= 1e-8, "certificate.one_dim_kernel", p,
             fmt("max_smallest", smallest) + " " + fmt("min_second", second));
}

void suite_injectivity(const VerifyOptions& o, Rng& rng, Reporter& rep) {
    std::size_t ok = 0;
    for (std::size_t t = 0; t < o.trials; ++t) {
        const InjectivityReport r = check_injectivity_on_T(o.kind, draw_in_set(rng, o.kind, o.n));
        if (r.injective) ++ok;
    }
    rep.line(ok == o.trials, "injectivity.in_set", params(o),
             "injective=" + std::to_string(ok) + "/" + std::to_string(o.trials));
    if (o.kind == EnsembleKind::Psi || o.n >= 3) {
        ComplexVector x = gaussian_complex(rng, o.n, 1.0);
        x[o.kind == EnsembleKind::Psi ? 0 : 1] = 0.0;
        const InjectivityReport r = check_injectivity_on_T(o.kind, x);
        rep.line(!r.injective, "injectivity.out_of_set", params(o, true),
                 "rank=" + std::to_string(r.rank) + " dim=" + std::to_string(r.dimension));
    }
}

void suite_masks(const VerifyOptions& o, Rng& rng, Reporter& rep) {
    const MaskSet masks = build_masks(o.kind, o.n);
    const Ensemble e = o.kind == EnsembleKind::Phi ? build_ensemble(EnsembleKind::Phi, o.n)
                                                   : build_ensemble(EnsembleKind::Psi, o.n + 1);
    double worst = 0.0;
    for (std::size_t t = 0; t < o.trials; ++t) {
        const ComplexVector x = gaussian_complex(rng, o.n, 1.0);
        const IntensityVector a = mask_measure(x, masks);
        const IntensityVector b = measure(e, o.kind == EnsembleKind::Phi ? dft(x) : psi_augment(x));
        for (std::size_t l = 0; l < a.size(); ++l) {
            worst = std::max(worst, std::abs(a.values[l] - b.values[l]) / std::max(1.0, b.values[l]));
        }
    }
    rep.line(worst <= 1e-10, "masks.equivalence", params(o), fmt("max_rel", worst));
}

void suite_bounds(Reporter& rep) {
    const PsiBound pb = bound_psi(100.0, 1.0, 1.0, 0.5);
    rep.line(std::abs(pb.high - 0.72) <= 1e-12, "bounds.psi_high", "snr=100 sigma_x2=1", fmt("value", pb.high));
    const double low = std::sqrt(1.5) * 42.0 / 10.0;
    rep.line(std::abs(pb.low - low) <= 1e-12, "bounds.psi_low", "snr=100 sigma_x2=1", fmt("value", pb.low));
    rep.line(std::abs(pb.threshold_db - 10.0 * std::log10(9.0)) <= 1e-12, "bounds.psi_threshold",
             "sigma_x2=1", fmt("db", pb.threshold_db));
    const double phi = bound_phi(100.0, 1.0, 32, 1.0, 0.5);
    rep.line(std::abs(phi - 3.84) <= 1e-12, "bounds.phi", "snr=100 n=32", fmt("value", phi));
    double sum = 0.0;
    for (std::size_t m = 0; m + 2 <= 10; ++m) sum += (10.0 - m - 1.0) * std::pow(1.2, static_cast<double>(m));
    sum *= 6.0 / 9.0;
    const double c3 = phi_c3(10, 1.0, 0.6);
    rep.line(std::abs(c3 - sum) <= 1e-10 * sum, "bounds.c3_closed_form", "n=10 gamma=0.6",
             fmt("rel_err", std::abs(c3 - sum) / sum));
}

}  // namespace

std::size_t run_verify(const VerifyOptions& o, std::ostream& out) {
    if (o.trials < 1) throw std::invalid_argument("verify: trials must be at least 1");
    const bool needs_kind = o.suite == VerifySuite::Nullspace || o.suite == VerifySuite::Certificate ||
                            o.suite == VerifySuite::Injectivity || o.suite == VerifySuite::Masks;
    if (needs_kind && o.kind == EnsembleKind::Random) {
        throw std::invalid_argument("verify: suite needs --kind phi or psi");
    }
    if (needs_kind && o.n < 2) throw DimensionError("verify: N must be at least 2");
    Rng rng(o.seed, 0);
    Reporter rep(out);
    switch (o.suite) {
        case VerifySuite::Frames: suite_frames(o, rng, rep); break;
        case VerifySuite::Nullspace: suite_nullspace(o, rep); break;
        case VerifySuite::Certificate: suite_certificate(o, rng, rep); break;
        case VerifySuite::Injectivity: suite_injectivity(o, rng, rep); break;
        case VerifySuite::Masks: suite_masks(o, rng, rep); break;
        case VerifySuite::Bounds: suite_bounds(rep); break;
    }
    return rep.failures();
}

}  // namespace phasekit
