// SPDX-License-Identifier: Apache-2.0

#include "phasekit/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <random>
#include <sstream>

#include "phasekit/bench.hpp"
#include "phasekit/io.hpp"
#include "phasekit/recovery_algebraic.hpp"
#include "phasekit/recovery_sdp.hpp"
#include "phasekit/verify.hpp"

namespace phasekit {

namespace {

constexpr const char* kVectorFormat =
    "Signal files: one complex entry per line, \"re im\" (decimal, '#' starts a comment).\n";
constexpr const char* kEnsembleFormat =
    "Ensemble files: header line \"<kind> <N> <L>\", then L blocks of N \"re im\" lines,\n"
    "each block followed by a blank line.\n";
constexpr const char* kIntensityFormat =
    "Measurement files: optional \"# noise_variance <v>\" line, then one intensity per line.\n";
constexpr const char* kCsvFormat =
    "CSV: header snr_db,mse_mean,mse_std,bound_high,bound_low,trials,degenerate; 9 significant digits.\n";

std::string fmt_g(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

double parse_snr_value(const std::string& s) {
    if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != s.size() || s.empty() || !std::isfinite(v)) {
        throw std::invalid_argument("bad SNR value '" + s + "'");
    }
    return v;
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& seed) {
    if (seed) return *seed;
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

struct Common {
    std::optional<std::uint64_t> seed;
    std::string out;
};

void add_seed(CLI::App* app, Common& c) {
    app->add_option("--seed", c.seed, "64-bit RNG seed (random if omitted; always printed)");
}

CLI::Option* add_kind(CLI::App* app, std::string& kind, const std::string& choices) {
    return app->add_option("--kind", kind, "ensemble kind {" + choices + "}")->required();
}

}  // namespace

std::vector<double> parse_snr_grid(const std::string& text) {
    std::vector<double> grid;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.find(':') == std::string::npos) {
            grid.push_back(parse_snr_value(tok));
            continue;
        }
        std::stringstream rs(tok);
        std::string a, s, b;
        if (!std::getline(rs, a, ':') || !std::getline(rs, s, ':') || !std::getline(rs, b, ':') ||
            rs.rdbuf()->in_avail() > 0) {
            throw std::invalid_argument("bad SNR range '" + tok + "'");
        }
        const double start = parse_snr_value(a), step = parse_snr_value(s), stop = parse_snr_value(b);
        if (!std::isfinite(start) || !std::isfinite(stop) || !(step > 0.0) || !std::isfinite(step) || stop < start) {
            throw std::invalid_argument("bad SNR range '" + tok + "'");
        }
        const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
        for (std::size_t i = 0; i < count; ++i) grid.push_back(start + static_cast<double>(i) * step);
    }
    if (grid.empty()) throw std::invalid_argument("empty SNR grid");
    return grid;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"phasekit: phase retrieval from deterministic and random intensity measurements", "phasekit"};
    app.require_subcommand(1);
    app.footer(std::string("\nFile formats:\n") + kVectorFormat + kEnsembleFormat + kIntensityFormat + kCsvFormat +
               "Exit codes: 0 ok, 1 invalid input, 2 numerical failure.");

    Common common;

    // gen-ensemble
    std::string kind_text;
    std::size_t n = 0, l = 0;
    auto* gen = app.add_subcommand("gen-ensemble", "write a measurement ensemble");
    add_kind(gen, kind_text, "phi|psi|random");
    gen->add_option("--n", n, "signal dimension N")->required();
    gen->add_option("--l", l, "number of vectors (random only)");
    add_seed(gen, common);
    gen->add_option("--out", common.out, "ensemble file")->required();
    gen->footer(std::string("\n") + kEnsembleFormat);

    // measure
    std::string ensemble_path, signal_path, measurements_path, truth_path;
    double noise_var = 0.0;
    auto* meas = app.add_subcommand("measure", "evaluate |<x, v_l>|^2 plus optional Gaussian noise");
    meas->add_option("--ensemble", ensemble_path, "ensemble file")->required();
    meas->add_option("--signal", signal_path, "signal file")->required();
    meas->add_option("--noise-var", noise_var, "noise variance per measurement (default 0)");
    add_seed(meas, common);
    meas->add_option("--out", common.out, "measurement file")->required();
    meas->footer(std::string("\n") + kVectorFormat + kEnsembleFormat + kIntensityFormat);

    // recover
    std::string method_text = "algebraic";
    std::optional<double> epsilon;
    SdpConfig sdp;
    auto* rec = app.add_subcommand("recover", "recover a signal from intensity measurements");
    rec->add_option("--method", method_text, "{algebraic|sdp} (default algebraic)");
    add_kind(rec, kind_text, "phi|psi|random");
    rec->add_option("--n", n, "signal dimension N")->required();
    rec->add_option("--measurements", measurements_path, "measurement file")->required();
    rec->add_option("--ensemble", ensemble_path, "ensemble file (required for random)");
    rec->add_option("--truth", truth_path, "true signal; prints the aligned error");
    rec->add_option("--epsilon", epsilon,
                    "SDP noise radius (default L * noise_variance from the file, else 0)");
    rec->add_option("--max-iter", sdp.max_iter, "SDP iteration cap (default 5000)");
    rec->add_option("--tol", sdp.tol, "SDP relative-change tolerance (default 1e-7)");
    add_seed(rec, common);
    rec->add_option("--out", common.out, "recovered signal file")->required();
    rec->footer(std::string("\n") + kVectorFormat + kEnsembleFormat + kIntensityFormat);

    // bench
    BenchConfig bc;
    std::string snr_text = "10:10:50";
    std::optional<double> mu;
    auto* bench = app.add_subcommand("bench", "Monte Carlo MSE sweep over an SNR grid");
    add_kind(bench, kind_text, "phi|psi|random");
    bench->add_option("--n", bc.n, "signal dimension N (default 64)");
    bench->add_option("--l", bc.random_l, "number of vectors (random only)");
    bench->add_option("--method", method_text, "{algebraic|sdp} (default algebraic)");
    bench->add_option("--snr", snr_text, "dB list or start:step:stop, 'inf' = noiseless (default 10:10:50)");
    bench->add_option("--trials", bc.trials, "trials per SNR point (default 1000)");
    bench->add_option("--sigma-x2", bc.sigma_x2, "signal variance per entry (default 1)");
    bench->add_flag("--fix-first", bc.fix_first, "set x[0] = 1 in every trial");
    bench->add_option("--mu", mu, "bound parameter mu (default sqrt(sigma_x2))");
    bench->add_option("--gamma", bc.gamma, "bound parameter gamma (default 0.5)");
    bench->add_option("--jobs", bc.jobs, "worker threads (default 1; output does not depend on it)");
    bench->add_option("--epsilon", epsilon, "SDP noise radius (default L * noise variance)");
    bench->add_option("--max-iter", bc.sdp.max_iter, "SDP iteration cap (default 5000)");
    bench->add_option("--tol", bc.sdp.tol, "SDP relative-change tolerance (default 1e-7)");
    add_seed(bench, common);
    bench->add_option("--out", common.out, "CSV file (printed to stdout if omitted)");
    bench->footer(std::string("\n") + kCsvFormat);

    // verify
    std::string suite_text;
    VerifyOptions vo;
    auto* ver = app.add_subcommand("verify", "self-check suites; one PASS/FAIL line per assertion");
    ver->add_option("--suite", suite_text, "{frames|nullspace|certificate|injectivity|masks|bounds}")->required();
    ver->add_option("--kind", kind_text, "{phi|psi} (default phi)");
    ver->add_option("--n", vo.n, "dimension, or the largest dimension for nullspace (default 8)");
    ver->add_option("--trials", vo.trials, "random trials (default 20)");
    add_seed(ver, common);
    ver->footer("\nOutput: lines \"PASS|FAIL <check> <params> <metric>\"; exit 2 if any FAIL.");

    // masks
    auto* masks = app.add_subcommand("masks", "measure through the four masks and the DFT, then recover");
    add_kind(masks, kind_text, "phi|psi");
    masks->add_option("--n", n, "signal dimension N")->required();
    masks->add_option("--signal", signal_path, "signal file (random Gaussian if omitted)");
    masks->add_option("--noise-var", noise_var, "noise variance per measurement (default 0)");
    add_seed(masks, common);
    masks->add_option("--out", common.out, "recovered signal file");
    masks->footer(std::string("\nPhi: 4(N-1) intensities, recovery of dft(x). Psi: 4N intensities, recovery of\n"
                              "(x[0], dft(x)) in C^(N+1).\n") +
                  kVectorFormat);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            app.exit(e, out, err);
            return kExitOk;
        }
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    }

    try {
        const std::uint64_t seed = resolve_seed(common.seed);
        out << "seed: " << seed << '\n';

        if (gen->parsed()) {
            const EnsembleKind kind = parse_kind(kind_text);
            Rng rng(seed, 0);
            std::optional<Ensemble> e;
            if (kind == EnsembleKind::Random) {
                if (l == 0) throw std::invalid_argument("--l is required for random ensembles");
                e.emplace(build_random_ensemble(rng, n, l));
            } else {
                if (l != 0 && l != deterministic_count(n)) {
                    throw std::invalid_argument("--l is only accepted for random ensembles");
                }
                e.emplace(build_ensemble(kind, n));
            }
            save_file(common.out, [&](std::ostream& o) { write_ensemble(o, *e); });
            out << "wrote " << e->size() << " vectors of dimension " << e->dim() << " to " << common.out << '\n';
            return kExitOk;
        }

        if (meas->parsed()) {
            const Ensemble e = load_ensemble(ensemble_path);
            const ComplexVector x = load_complex_vector(signal_path);
            if (!(noise_var >= 0.0) || !std::isfinite(noise_var)) {
                throw std::invalid_argument("--noise-var must be finite and nonnegative");
            }
            IntensityVector b = measure(e, x);
            if (noise_var > 0.0) {
                Rng rng(seed, 0);
                b = add_noise(b, noise_var, rng);
            }
            save_file(common.out, [&](std::ostream& o) { write_intensities(o, b); });
            out << "wrote " << b.size() << " measurements to " << common.out << '\n';
            return kExitOk;
        }

        if (rec->parsed()) {
            const EnsembleKind kind = parse_kind(kind_text);
            const Method method = parse_method(method_text);
            const IntensityVector b = load_intensities(measurements_path);
            std::optional<ComplexVector> truth;
            if (!truth_path.empty()) truth = load_complex_vector(truth_path);
            ComplexVector x_hat;
            int status = kExitOk;
            if (method == Method::Algebraic) {
                if (kind == EnsembleKind::Random) {
                    throw std::invalid_argument("the algebraic method needs --kind phi or psi");
                }
                const RecoveryReport r = recover(kind, b, n);
                x_hat = r.x_hat;
                out << "degenerate_blocks: " << r.degenerate_count << '\n';
                if (kind == EnsembleKind::Psi) out << "broken_links: " << r.broken_links.size() << '\n';
            } else {
                std::optional<Ensemble> e;
                if (!ensemble_path.empty()) {
                    e.emplace(load_ensemble(ensemble_path));
                    if (e->kind() != kind || e->dim() != n) {
                        throw std::invalid_argument("ensemble file does not match --kind/--n");
                    }
                } else if (kind == EnsembleKind::Random) {
                    throw std::invalid_argument("--ensemble is required for random ensembles");
                } else {
                    e.emplace(build_ensemble(kind, n));
                }
                if (epsilon) {
                    sdp.epsilon = *epsilon;
                } else if (b.noise_variance) {
                    sdp.epsilon = noise_radius(e->size(), *b.noise_variance);
                }
                sdp.validate();
                const SdpResult r = solve_phaselift(*e, b, sdp);
                x_hat = r.x_hat;
                out << "epsilon: " << fmt_g(sdp.epsilon) << '\n'
                    << "iterations: " << r.iterations << '\n'
                    << "residual: " << fmt_g(r.residual) << '\n'
                    << "rank1_gap: " << fmt_g(r.rank1_gap) << '\n'
                    << "converged: " << (r.converged ? "yes" : "no") << '\n';
                if (!r.converged) {
                    err << "error: SDP did not converge in " << r.iterations << " iterations\n";
                    status = kExitNumerical;
                }
            }
            save_file(common.out, [&](std::ostream& o) { write_complex_vector(o, x_hat); });
            if (truth) {
                if (truth->size() != x_hat.size()) throw DimensionError("--truth has the wrong dimension");
                const double e = aligned_error(*truth, x_hat);
                out << "aligned_error: " << fmt_g(e) << '\n'
                    << "relative_error: " << fmt_g(e / truth->norm_squared()) << '\n';
            }
            out << "wrote " << x_hat.size() << " entries to " << common.out << '\n';
            return status;
        }

        if (bench->parsed()) {
            bc.kind = parse_kind(kind_text);
            bc.method = parse_method(method_text);
            bc.snr_db = parse_snr_grid(snr_text);
            bc.mu = mu;
            bc.epsilon = epsilon;
            bc.seed = seed;
            bc.validate();
            const BenchResult res = run_bench(bc);
            std::size_t total = 0, degenerate = 0;
            for (const BenchPoint& p : res.points) {
                total += p.trials;
                degenerate += p.degenerate;
                out << "snr_db=" << fmt_g(p.snr_db) << " mse=" << fmt_g(p.mse_mean) << " ("
                    << fmt_g(10.0 * std::log10(p.mse_mean)) << " dB) std=" << fmt_g(p.mse_std)
                    << " bound_high=" << fmt_g(p.bound_high) << " bound_low=" << fmt_g(p.bound_low)
                    << " degenerate=" << p.degenerate << '\n';
            }
            out << "small_hub_fraction: " << fmt_g(res.small_hub_fraction) << '\n';
            if (common.out.empty()) {
                write_csv(res, out);
            } else {
                save_file(common.out, [&](std::ostream& o) { write_csv(res, o); });
                out << "wrote " << res.points.size() << " rows to " << common.out << '\n';
            }
            if (total > 0 && degenerate == total) {
                err << "error: every trial was degenerate\n";
                return kExitNumerical;
            }
            return kExitOk;
        }

        if (ver->parsed()) {
            vo.suite = parse_suite(suite_text);
            if (!kind_text.empty()) vo.kind = parse_kind(kind_text);
            vo.seed = seed;
            const std::size_t failures = run_verify(vo, out);
            if (failures > 0) {
                err << "error: " << failures << " check(s) failed\n";
                return kExitNumerical;
            }
            return kExitOk;
        }

        if (masks->parsed()) {
            const EnsembleKind kind = parse_kind(kind_text);
            if (kind == EnsembleKind::Random) throw std::invalid_argument("masks needs --kind phi or psi");
            if (!(noise_var >= 0.0) || !std::isfinite(noise_var)) {
                throw std::invalid_argument("--noise-var must be finite and nonnegative");
            }
            Rng rng(seed, 0);
            const ComplexVector x = signal_path.empty() ? gaussian_complex(rng, n, 1.0) : load_complex_vector(signal_path);
            if (x.size() != n) throw DimensionError("signal length does not match --n");
            const MaskSet ms = build_masks(kind, n);
            IntensityVector b = mask_measure(x, ms);
            if (noise_var > 0.0) b = add_noise(b, noise_var, rng);
            out << "measurements: " << b.size() << '\n';
            const RecoveryReport r = recover(kind, b, kind == EnsembleKind::Phi ? n : n + 1);
            ComplexVector x_hat;
            if (kind == EnsembleKind::Phi) {
                x_hat = idft(r.x_hat);
            } else {
                ComplexVector spectrum(n);
                for (std::size_t k = 0; k < n; ++k) spectrum[k] = r.x_hat[k + 1];
                x_hat = idft(spectrum);
            }
            const double e = aligned_error(x, x_hat);
            out << "degenerate_blocks: " << r.degenerate_count << '\n'
                << "aligned_error: " << fmt_g(e) << '\n'
                << "relative_error: " << fmt_g(e / x.norm_squared()) << '\n';
            if (!common.out.empty()) {
                save_file(common.out, [&](std::ostream& o) { write_complex_vector(o, x_hat); });
                out << "wrote " << x_hat.size() << " entries to " << common.out << '\n';
            }
            return kExitOk;
        }
    } catch (const RecoveryError& e) {
        err << "error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const ConvergenceError& e) {
        err << "error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitNumerical;
    }
    return kExitValidation;
}

}  // namespace phasekit
