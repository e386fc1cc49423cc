// SPDX-License-Identifier: Apache-2.0

#include "phasekit/bench.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <thread>

#include "phasekit/recovery_algebraic.hpp"

namespace phasekit {

std::string_view to_string(Method m) { return m == Method::Algebraic ? "algebraic" : "sdp"; }

Method parse_method(std::string_view text) {
    if (text == "algebraic") return Method::Algebraic;
    if (text == "sdp") return Method::Sdp;
    throw std::invalid_argument("unknown method '" + std::string(text) + "'");
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

void BenchConfig::validate() const {
    if (trials < 1) throw std::invalid_argument("bench: trials must be at least 1");
    if (!(sigma_x2 > 0.0) || !std::isfinite(sigma_x2)) {
        throw std::invalid_argument("bench: sigma_x2 must be positive");
    }
    if (snr_db.empty()) throw std::invalid_argument("bench: empty SNR grid");
    for (double s : snr_db) {
        if (std::isnan(s) || s == -std::numeric_limits<double>::infinity()) {
            throw std::invalid_argument("bench: SNR values must be finite or +inf");
        }
    }
    if (kind == EnsembleKind::Random) {
        if (random_l < 1) throw std::invalid_argument("bench: random ensembles need L >= 1");
        if (method == Method::Algebraic) {
            throw std::invalid_argument("bench: algebraic recovery needs phi or psi");
        }
        if (n < 1) throw DimensionError("bench: N must be positive");
    } else if (n < 2) {
        throw DimensionError("bench: N must be at least 2");
    }
    if (mu && !(*mu > 0.0)) throw std::invalid_argument("bench: mu must be positive");
    if (!(gamma > 0.0)) throw std::invalid_argument("bench: gamma must be positive");
    if (epsilon && !(*epsilon >= 0.0)) throw std::invalid_argument("bench: epsilon must be >= 0");
    if (jobs < 1) throw std::invalid_argument("bench: jobs must be at least 1");
    sdp.validate();
}

double BenchConfig::mu_value() const { return mu ? *mu : std::sqrt(sigma_x2); }

PsiBound bound_psi(double snr, double sigma_x2, double mu, double gamma) {
    if (!(snr > 0.0) || !(sigma_x2 > 0.0) || !(mu > 0.0) || !(gamma > 0.0)) {
        throw std::invalid_argument("bound_psi: arguments must be positive");
    }
    PsiBound b;
    b.high = 48.0 * (1.0 + gamma) / (mu * mu * snr);
    b.low = 28.0 * std::sqrt(1.5) * (1.0 + gamma) / (std::sqrt(sigma_x2) * std::sqrt(snr));
    // ||x||^2 + (N-2)|x[0]|^2 >= (9/2) ||nu||^2 averaged with |x[0]|^2 ~ mu^2
    // and E||nu||^2 = 4(N-1) sigma_nu^2, for large N.
    b.threshold_db = 10.0 * std::log10(18.0 / (1.0 + mu * mu / sigma_x2));
    const double ratio = (48.0 / (mu * mu)) / (28.0 * std::sqrt(1.5) / std::sqrt(sigma_x2));
    b.crossing_db = 10.0 * std::log10(ratio * ratio);
    return b;
}

double phi_c3(std::size_t n, double mu, double gamma) {
    if (n < 2 || !(mu > 0.0) || !(gamma > 0.0)) throw std::invalid_argument("phi_c3: bad arguments");
    const double nn = static_cast<double>(n);
    const double d = 2.0 * gamma - 1.0;
    if (std::abs(d) < 1e-6) return 3.0 * nn / (mu * mu);
    const double g2 = 2.0 * gamma;
    return (6.0 / (mu * mu)) / (d * d) * (std::pow(g2, nn) - g2 * nn + nn - 1.0) / (nn - 1.0);
}

double bound_phi(double snr, double sigma_x2, std::size_t n, double mu, double gamma) {
    if (!(snr > 0.0) || !(sigma_x2 > 0.0)) throw std::invalid_argument("bound_phi: bad arguments");
    return 4.0 * phi_c3(n, mu, gamma) / snr;
}

namespace {

struct TrialOutcome {
    double error = 0.0;
    double norm2 = 0.0;
    double hub2 = 0.0;
    bool degenerate = false;
};

// det_ens / det_op describe the fixed ensemble of a deterministic kind;
// det_op is only built for the SDP path.
TrialOutcome run_trial(const BenchConfig& cfg, const Ensemble* det_ens, const LiftedOperator* det_op,
                       std::size_t trial, double sigma_nu2) {
    Rng rng(cfg.seed, trial);
    ComplexVector x = gaussian_complex(rng, cfg.n, cfg.sigma_x2);
    if (cfg.fix_first) x[0] = 1.0;

    TrialOutcome out;
    out.norm2 = x.norm_squared();
    out.hub2 = std::norm(x[0]);

    std::optional<LiftedOperator> own_op;
    if (cfg.kind == EnsembleKind::Random) {
        own_op.emplace(build_random_ensemble(rng, cfg.n, cfg.random_l));
    }
    const Ensemble& ens = own_op ? own_op->ensemble() : *det_ens;
    const IntensityVector b = add_noise(measure(ens, x), sigma_nu2, rng);

    ComplexVector x_hat(cfg.n);
    if (cfg.method == Method::Algebraic) {
        try {
            const RecoveryReport rep = recover(cfg.kind, b, cfg.n);
            x_hat = rep.x_hat;
            out.degenerate = rep.degenerate_count > 0 || !rep.broken_links.empty();
        } catch (const RecoveryError&) {
            out.degenerate = true;
        }
    } else {
        SdpConfig sc = cfg.sdp;
        sc.epsilon = cfg.epsilon ? *cfg.epsilon : noise_radius(ens.size(), sigma_nu2);
        const SdpResult res = solve_phaselift(own_op ? *own_op : *det_op, b, sc);
        x_hat = res.x_hat;
        out.degenerate = !res.converged;
    }
    out.error = aligned_error(x, x_hat);
    return out;
}

}  // namespace

BenchResult run_bench(const BenchConfig& cfg) {
    cfg.validate();
    std::optional<Ensemble> det_ens;
    std::optional<LiftedOperator> det_op;
    if (cfg.kind != EnsembleKind::Random) {
        det_ens.emplace(build_ensemble(cfg.kind, cfg.n));
        if (cfg.method == Method::Sdp) det_op.emplace(*det_ens);
    }

    const std::size_t points = cfg.snr_db.size();
    const std::size_t total = points * cfg.trials;
    std::vector<TrialOutcome> outcomes(total);
    std::vector<double> sigma_nu2(points);
    for (std::size_t p = 0; p < points; ++p) {
        const double s = cfg.snr_db[p];
        sigma_nu2[p] = std::isinf(s) ? 0.0 : cfg.sigma_x2 / db_to_linear(s);
    }

    auto trial_at = [&](std::size_t idx) {
        const std::size_t p = idx / cfg.trials;
        outcomes[idx] = run_trial(cfg, det_ens ? &*det_ens : nullptr, det_op ? &*det_op : nullptr,
                                  idx % cfg.trials, sigma_nu2[p]);
    };

    const unsigned workers = std::max(1u, std::min<unsigned>(cfg.jobs, static_cast<unsigned>(total)));
    if (workers == 1) {
        for (std::size_t i = 0; i < total; ++i) trial_at(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        std::exception_ptr failure;
        std::atomic<bool> failed{false};
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                try {
                    for (std::size_t i = next++; i < total && !failed; i = next++) trial_at(i);
                } catch (...) {
                    if (!failed.exchange(true)) failure = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
        if (failure) std::rethrow_exception(failure);
    }

    BenchResult res;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const double mu = cfg.mu_value();
    std::size_t small = 0;
    for (std::size_t t = 0; t < cfg.trials; ++t) {
        if (outcomes[t].hub2 < cfg.sigma_x2) ++small;
    }
    res.small_hub_fraction = static_cast<double>(small) / static_cast<double>(cfg.trials);

    for (std::size_t p = 0; p < points; ++p) {
        BenchPoint pt;
        pt.snr_db = cfg.snr_db[p];
        pt.trials = cfg.trials;
        double se = 0.0, sn = 0.0;
        for (std::size_t t = 0; t < cfg.trials; ++t) {
            const auto& o = outcomes[p * cfg.trials + t];
            se += o.error;
            sn += o.norm2;
            if (o.degenerate) ++pt.degenerate;
        }
        const double count = static_cast<double>(cfg.trials);
        const double mean_e = se / count;
        double var = 0.0;
        for (std::size_t t = 0; t < cfg.trials; ++t) {
            const double d = outcomes[p * cfg.trials + t].error - mean_e;
            var += d * d;
        }
        var = cfg.trials > 1 ? var / (count - 1.0) : 0.0;
        pt.mse_mean = sn > 0.0 ? se / sn : 0.0;
        pt.mse_std = sn > 0.0 ? std::sqrt(var) / (sn / count) : 0.0;

        const double snr = std::isinf(pt.snr_db) ? std::numeric_limits<double>::infinity()
                                                 : db_to_linear(pt.snr_db);
        pt.bound_high = nan;
        pt.bound_low = nan;
        if (std::isinf(snr)) {
            if (cfg.kind != EnsembleKind::Random) pt.bound_high = 0.0;
            if (cfg.kind == EnsembleKind::Psi) pt.bound_low = 0.0;
        } else if (cfg.kind == EnsembleKind::Psi) {
            const PsiBound b = bound_psi(snr, cfg.sigma_x2, mu, cfg.gamma);
            pt.bound_high = b.high;
            pt.bound_low = b.low;
        } else if (cfg.kind == EnsembleKind::Phi) {
            pt.bound_high = bound_phi(snr, cfg.sigma_x2, cfg.n, mu, cfg.gamma);
        }
        res.points.push_back(pt);
    }
    return res;
}

void write_csv(const BenchResult& result, std::ostream& out) {
    out << "snr_db,mse_mean,mse_std,bound_high,bound_low,trials,degenerate\n";
    char buf[256];
    for (const auto& p : result.points) {
        std::snprintf(buf, sizeof buf, "%.9g,%.9g,%.9g,%.9g,%.9g,%zu,%zu\n", p.snr_db, p.mse_mean,
                      p.mse_std, p.bound_high, p.bound_low, p.trials, p.degenerate);
        out << buf;
    }
}

}  // namespace phasekit
