// SPDX-License-Identifier: Apache-2.0
//
// Text formats. Lines starting with '#' and blank lines are ignored unless
// noted.
//   complex vector: one "re im" pair per line
//   ensemble:       header "kind N L", then L complex vectors, each
//                   terminated by a blank line
//   intensities:    one real per line; optional "# noise_variance v"

#pragma once

#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "phasekit/measurements.hpp"

namespace phasekit {

class ParseError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

void write_complex_vector(std::ostream& out, const ComplexVector& x);
ComplexVector read_complex_vector(std::istream& in);

void write_ensemble(std::ostream& out, const Ensemble& e);
Ensemble read_ensemble(std::istream& in);

void write_intensities(std::ostream& out, const IntensityVector& b);
IntensityVector read_intensities(std::istream& in);

ComplexVector load_complex_vector(const std::string& path);
Ensemble load_ensemble(const std::string& path);
IntensityVector load_intensities(const std::string& path);

/// File cannot be opened or written.
class IoError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Opens path for writing and hands the stream to write(out).
template <class F>
void save_file(const std::string& path, F&& write) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    write(out);
    out.flush();
    if (!out) throw IoError("write to '" + path + "' failed");
}

}  // namespace phasekit
