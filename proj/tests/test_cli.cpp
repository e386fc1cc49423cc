// SPDX-License-Identifier: Apache-2.0

#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

#include "phasekit/cli.hpp"
#include "phasekit/io.hpp"
#include "phasekit/recovery_algebraic.hpp"
#include "test_support.hpp"

using namespace phasekit;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch() {
    const fs::path dir = fs::temp_directory_path() / ("phasekit_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

double value_after(const std::string& text, const std::string& key) {
    const auto p = text.find(key);
    REQUIRE(p != std::string::npos);
    return std::stod(text.substr(p + key.size()));
}

}  // namespace

TEST_CASE("snr grid parsing") {
    CHECK(parse_snr_grid("10") == std::vector<double>{10.0});
    CHECK(parse_snr_grid("10:10:50") == std::vector<double>{10, 20, 30, 40, 50});
    CHECK(parse_snr_grid("0:2.5:5,inf").size() == 4);
    CHECK(std::isinf(parse_snr_grid("inf")[0]));
    CHECK(parse_snr_grid("-5,5") == std::vector<double>{-5.0, 5.0});
    CHECK_THROWS_AS(parse_snr_grid("10:0:20"), std::invalid_argument);
    CHECK_THROWS_AS(parse_snr_grid("abc"), std::invalid_argument);
    CHECK_THROWS_AS(parse_snr_grid("1:2"), std::invalid_argument);
    CHECK_THROWS_AS(parse_snr_grid("20:5:10"), std::invalid_argument);
}

TEST_CASE("gen-ensemble writes 4(N-1) vectors") {
    const fs::path dir = scratch();
    const Run r = cli({"gen-ensemble", "--kind", "psi", "--n", "8", "--out", (dir / "ens.txt").string()});
    CHECK(r.code == 0);
    CHECK(r.out.rfind("seed: ", 0) == 0);
    const Ensemble e = load_ensemble((dir / "ens.txt").string());
    CHECK(e.size() == 28);
    CHECK(e.kind() == EnsembleKind::Psi);
    fs::remove_all(dir);
}

TEST_CASE("measure then recover round trip") {
    const fs::path dir = scratch();
    Rng rng(4, 0);
    const ComplexVector x = gaussian_complex(rng, 8, 1.0);
    save_file((dir / "x.txt").string(), [&](std::ostream& o) { write_complex_vector(o, x); });
    REQUIRE(cli({"gen-ensemble", "--kind", "psi", "--n", "8", "--out", (dir / "ens.txt").string()}).code == 0);

    SUBCASE("noiseless is exact") {
        REQUIRE(cli({"measure", "--ensemble", (dir / "ens.txt").string(), "--signal", (dir / "x.txt").string(),
                     "--seed", "7", "--out", (dir / "b.txt").string()})
                    .code == 0);
        const Run r = cli({"recover", "--method", "algebraic", "--kind", "psi", "--n", "8", "--measurements",
                           (dir / "b.txt").string(), "--out", (dir / "xh.txt").string(), "--truth",
                           (dir / "x.txt").string()});
        CHECK(r.code == 0);
        CHECK(value_after(r.out, "relative_error: ") <= 1e-20);
        const ComplexVector xh = load_complex_vector((dir / "xh.txt").string());
        CHECK(aligned_error(x, xh) <= 1e-20 * x.norm_squared());
    }
    SUBCASE("noisy with fixed seed is reproducible") {
        const std::vector<std::string> m = {"measure", "--ensemble", (dir / "ens.txt").string(), "--signal",
                                            (dir / "x.txt").string(), "--noise-var", "0.01", "--seed", "7",
                                            "--out", (dir / "b.txt").string()};
        REQUIRE(cli(m).code == 0);
        const std::string first = slurp(dir / "b.txt");
        REQUIRE(cli(m).code == 0);
        CHECK(slurp(dir / "b.txt") == first);
        CHECK(first.rfind("# noise_variance 0.01", 0) == 0);
        const Run r = cli({"recover", "--kind", "psi", "--n", "8", "--measurements", (dir / "b.txt").string(),
                           "--out", (dir / "xh.txt").string(), "--truth", (dir / "x.txt").string()});
        CHECK(r.code == 0);
        CHECK(value_after(r.out, "relative_error: ") < 0.2);
    }
    SUBCASE("sdp recovery") {
        REQUIRE(cli({"measure", "--ensemble", (dir / "ens.txt").string(), "--signal", (dir / "x.txt").string(),
                     "--out", (dir / "b.txt").string()})
                    .code == 0);
        const Run r = cli({"recover", "--method", "sdp", "--kind", "psi", "--n", "8", "--measurements",
                           (dir / "b.txt").string(), "--ensemble", (dir / "ens.txt").string(), "--out",
                           (dir / "xs.txt").string(), "--truth", (dir / "x.txt").string()});
        CHECK(r.code == 0);
        CHECK(r.out.find("converged: yes") != std::string::npos);
        CHECK(value_after(r.out, "relative_error: ") <= 1e-8);
    }
    fs::remove_all(dir);
}

TEST_CASE("exit codes") {
    const fs::path dir = scratch();
    CHECK(cli({}).code == 1);
    CHECK(cli({"frobnicate"}).code == 1);
    const Run unknown = cli({"gen-ensemble", "--kind", "psi", "--n", "8", "--out", "x", "--bogus"});
    CHECK(unknown.code == 1);
    CHECK(unknown.err.rfind("error:", 0) == 0);
    CHECK(cli({"gen-ensemble", "--kind", "psi", "--n", "1", "--out", (dir / "e.txt").string()}).code == 1);
    CHECK(cli({"recover", "--kind", "psi", "--n", "8", "--measurements", "/nonexistent", "--out", "x"}).code == 1);

    // all-zero measurements: every block is degenerate
    IntensityVector zeros;
    zeros.values.assign(28, 0.0);
    save_file((dir / "z.txt").string(), [&](std::ostream& o) { write_intensities(o, zeros); });
    const Run deg = cli({"recover", "--kind", "phi", "--n", "8", "--measurements", (dir / "z.txt").string(),
                         "--out", (dir / "xh.txt").string()});
    CHECK(deg.code == 2);
    CHECK(deg.err.rfind("error:", 0) == 0);

    // SDP iteration cap
    Rng rng(5, 0);
    const ComplexVector x = gaussian_complex(rng, 6, 1.0);
    const IntensityVector b = measure(build_ensemble(EnsembleKind::Phi, 6), x);
    save_file((dir / "b.txt").string(), [&](std::ostream& o) { write_intensities(o, b); });
    CHECK(cli({"recover", "--method", "sdp", "--kind", "phi", "--n", "6", "--measurements", (dir / "b.txt").string(),
               "--max-iter", "2", "--out", (dir / "xs.txt").string()})
              .code == 2);
    fs::remove_all(dir);
}

TEST_CASE("every subcommand documents itself") {
    for (const char* sub : {"gen-ensemble", "measure", "recover", "bench", "verify", "masks"}) {
        const Run r = cli({sub, "--help"});
        CHECK(r.code == 0);
        CHECK(r.out.find("--") != std::string::npos);
    }
    CHECK(cli({"--help"}).out.find("File formats") != std::string::npos);
    CHECK(cli({"recover", "--help"}).out.find("re im") != std::string::npos);
}

TEST_CASE("verify suites pass and print one line per check") {
    const Run r = cli({"verify", "--suite", "certificate", "--kind", "phi", "--n", "8", "--trials", "20", "--seed", "1"});
    CHECK(r.code == 0);
    CHECK(r.out.find("FAIL") == std::string::npos);
    CHECK(r.out.find("PASS certificate.Yx_zero") != std::string::npos);
    for (const char* suite : {"frames", "nullspace", "injectivity", "masks", "bounds"}) {
        for (const char* kind : {"phi", "psi"}) {
            const Run v = cli({"verify", "--suite", suite, "--kind", kind, "--n", "6", "--seed", "3"});
            CHECK_MESSAGE(v.code == 0, suite, " ", kind);
        }
    }
    CHECK(cli({"verify", "--suite", "nope"}).code == 1);
    CHECK(cli({"verify", "--suite", "masks", "--kind", "random"}).code == 1);
}

TEST_CASE("masks demo recovers the signal") {
    for (const char* kind : {"phi", "psi"}) {
        const Run r = cli({"masks", "--kind", kind, "--n", "16", "--seed", "9"});
        CHECK(r.code == 0);
        CHECK(value_after(r.out, "relative_error: ") <= 1e-20);
    }
}

TEST_CASE("bench binary is byte-identical across runs and --jobs") {
    const char* bin = std::getenv("PHASEKIT_CLI");
    REQUIRE(bin != nullptr);
    const fs::path dir = scratch();
    auto run = [&](const std::string& jobs, const std::string& name) {
        const std::string cmd = std::string(bin) + " bench --kind psi --n 16 --trials 50 --snr 10:10:30,inf --seed 42 --jobs " +
                                jobs + " --out " + (dir / name).string() + " > " + (dir / (name + ".log")).string();
        return WEXITSTATUS(std::system(cmd.c_str()));
    };
    REQUIRE(run("1", "a.csv") == 0);
    REQUIRE(run("1", "b.csv") == 0);
    REQUIRE(run("4", "c.csv") == 0);
    const std::string a = slurp(dir / "a.csv");
    CHECK(a.rfind("snr_db,mse_mean,mse_std,bound_high,bound_low,trials,degenerate\n", 0) == 0);
    CHECK(slurp(dir / "b.csv") == a);
    CHECK(slurp(dir / "c.csv") == a);
    CHECK(slurp(dir / "a.csv.log").rfind("seed: 42\n", 0) == 0);
    fs::remove_all(dir);
}
