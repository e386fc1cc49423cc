// SPDX-License-Identifier: Apache-2.0

#include "phasekit/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace phasekit {

namespace {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

bool is_blank(const std::string& line) {
    return line.find_first_not_of(" \t\r") == std::string::npos;
}

bool is_comment(const std::string& line) {
    const auto p = line.find_first_not_of(" \t");
    return p != std::string::npos && line[p] == '#';
}

cplx parse_pair(const std::string& line, std::size_t lineno) {
    std::istringstream ls(line);
    double re = 0.0, im = 0.0;
    std::string extra;
    if (!(ls >> re >> im) || (ls >> extra)) {
        throw ParseError("line " + std::to_string(lineno) + ": expected 're im', got '" + line + "'");
    }
    return {re, im};
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    return in;
}

}  // namespace

void write_complex_vector(std::ostream& out, const ComplexVector& x) {
    for (const auto& z : x) out << format_double(z.real()) << ' ' << format_double(z.imag()) << '\n';
}

ComplexVector read_complex_vector(std::istream& in) {
    std::vector<cplx> v;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (is_blank(line) || is_comment(line)) continue;
        v.push_back(parse_pair(line, lineno));
    }
    if (v.empty()) throw ParseError("complex vector: no entries");
    try {
        return ComplexVector(std::move(v));
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("complex vector: ") + e.what());
    }
}

void write_ensemble(std::ostream& out, const Ensemble& e) {
    out << to_string(e.kind()) << ' ' << e.dim() << ' ' << e.size() << '\n';
    for (const auto& v : e.vectors()) {
        write_complex_vector(out, v);
        out << '\n';
    }
}

Ensemble read_ensemble(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;
    std::string kind_text;
    std::size_t n = 0, l = 0;
    bool have_header = false;
    while (!have_header && std::getline(in, line)) {
        ++lineno;
        if (is_blank(line) || is_comment(line)) continue;
        std::istringstream hs(line);
        std::string extra;
        if (!(hs >> kind_text >> n >> l) || (hs >> extra)) {
            throw ParseError("ensemble: expected header 'kind N L'");
        }
        have_header = true;
    }
    if (!have_header) throw ParseError("ensemble: missing header");
    const EnsembleKind kind = parse_kind(kind_text);

    std::vector<ComplexVector> vecs;
    std::vector<cplx> cur;
    auto flush = [&] {
        if (cur.empty()) return;
        if (cur.size() != n) {
            throw ParseError("ensemble: vector " + std::to_string(vecs.size()) + " has " +
                             std::to_string(cur.size()) + " entries, expected " + std::to_string(n));
        }
        vecs.emplace_back(std::move(cur));
        cur.clear();
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (is_comment(line)) continue;
        if (is_blank(line)) {
            flush();
            continue;
        }
        cur.push_back(parse_pair(line, lineno));
    }
    flush();
    if (vecs.size() != l) {
        throw ParseError("ensemble: header declares " + std::to_string(l) + " vectors, found " +
                         std::to_string(vecs.size()));
    }
    return Ensemble(kind, n, std::move(vecs));
}

void write_intensities(std::ostream& out, const IntensityVector& b) {
    if (b.noise_variance) out << "# noise_variance " << format_double(*b.noise_variance) << '\n';
    for (double v : b.values) out << format_double(v) << '\n';
}

IntensityVector read_intensities(std::istream& in) {
    IntensityVector b;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (is_blank(line)) continue;
        if (is_comment(line)) {
            std::istringstream cs(line);
            std::string hash, key;
            double v = 0.0;
            if (cs >> hash >> key >> v && hash == "#" && key == "noise_variance") b.noise_variance = v;
            continue;
        }
        std::istringstream ls(line);
        double v = 0.0;
        std::string extra;
        if (!(ls >> v) || (ls >> extra) || !std::isfinite(v)) {
            throw ParseError("line " + std::to_string(lineno) + ": expected one real, got '" + line + "'");
        }
        b.values.push_back(v);
    }
    if (b.values.empty()) throw ParseError("intensities: no entries");
    return b;
}

ComplexVector load_complex_vector(const std::string& path) {
    auto in = open_in(path);
    return read_complex_vector(in);
}

Ensemble load_ensemble(const std::string& path) {
    auto in = open_in(path);
    return read_ensemble(in);
}

IntensityVector load_intensities(const std::string& path) {
    auto in = open_in(path);
    return read_intensities(in);
}

}  // namespace phasekit
