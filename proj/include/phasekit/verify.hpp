// SPDX-License-Identifier: Apache-2.0
//
// Self-check suites behind the `verify` subcommand. Each assertion prints
// one line "PASS|FAIL <check> <params> <metric>".

#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

#include "phasekit/measurements.hpp"

namespace phasekit {

enum class VerifySuite { Frames, Nullspace, Certificate, Injectivity, Masks, Bounds };

VerifySuite parse_suite(std::string_view text);
std::string_view to_string(VerifySuite s);

struct VerifyOptions {
    VerifySuite suite = VerifySuite::Frames;
    EnsembleKind kind = EnsembleKind::Phi;
    std::size_t n = 8;
    std::size_t trials = 20;
    std::uint64_t seed = 0;
};

/// Returns the number of FAIL lines written.
std::size_t run_verify(const VerifyOptions& opt, std::ostream& out);

}  // namespace phasekit
