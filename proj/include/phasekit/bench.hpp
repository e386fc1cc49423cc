// SPDX-License-Identifier: Apache-2.0
//
// Monte Carlo noise bench: SNR sweeps of normalized MSE with analytic
// bound overlays.
//
// Trial t draws from Rng(seed, t), re-created at every SNR point, in the
// order: signal, random ensemble (if any), noise. The same signals and the
// same standard-normal noise pattern are therefore reused across the grid,
// scaled by the noise level, and results do not depend on worker count.

#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

#include "phasekit/measurements.hpp"
#include "phasekit/recovery_sdp.hpp"

namespace phasekit {

enum class Method { Algebraic, Sdp };

std::string_view to_string(Method m);
Method parse_method(std::string_view text);

struct BenchConfig {
    EnsembleKind kind = EnsembleKind::Psi;
    std::size_t random_l = 0;  // Random only
    Method method = Method::Algebraic;
    std::size_t n = 64;
    std::vector<double> snr_db;  // +inf means noiseless
    std::size_t trials = 1000;
    double sigma_x2 = 1.0;
    bool fix_first = false;
    std::optional<double> mu;  // defaults to sqrt(sigma_x2)
    double gamma = 0.5;
    std::uint64_t seed = 0;
    unsigned jobs = 1;
    SdpConfig sdp;
    /// Overrides the SDP radius L * sigma_nu2 when set.
    std::optional<double> epsilon;

    void validate() const;
    double mu_value() const;
};

struct BenchPoint {
    double snr_db = 0.0;
    double mse_mean = 0.0;
    double mse_std = 0.0;
    double bound_high = 0.0;  // Psi high-SNR bound, or the Phi bound
    double bound_low = 0.0;   // Psi low-SNR bound; NaN otherwise
    std::size_t trials = 0;
    std::size_t degenerate = 0;
};

struct BenchResult {
    std::vector<BenchPoint> points;
    /// Fraction of trials with |x[0]|^2 < sigma_x2 (same at every point).
    double small_hub_fraction = 0.0;
};

BenchResult run_bench(const BenchConfig& cfg);

/// Header "snr_db,mse_mean,mse_std,bound_high,bound_low,trials,degenerate",
/// 9 significant digits.
void write_csv(const BenchResult& result, std::ostream& out);

struct PsiBound {
    double high = 0.0;
    double low = 0.0;
    /// SNR (dB) above which the high-SNR regime condition holds on average.
    double threshold_db = 0.0;
    /// SNR (dB) where the two expressions are equal.
    double crossing_db = 0.0;
};

/// high = 48 (1 + gamma) / (mu^2 snr), low = 28 sqrt(3/2) (1 + gamma) / (sigma_x sqrt(snr)).
PsiBound bound_psi(double snr, double sigma_x2, double mu, double gamma);

/// C3(N) for the Phi chain: 3N / mu^2 at gamma = 1/2, the geometric closed
/// form otherwise.
double phi_c3(std::size_t n, double mu, double gamma);

/// 4 C3(N) / snr
double bound_phi(double snr, double sigma_x2, std::size_t n, double mu, double gamma);

double db_to_linear(double db);

}  // namespace phasekit
