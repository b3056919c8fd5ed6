// Quantizer, symbol encoder, and the nearest-point decoder with its merged
// Voronoi lookup table.
#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "chancomp/function.hpp"

namespace chancomp {

using cxd = std::complex<double>;

// Uniform mid-tread quantizer on [lo, hi] with reconstruction points at the
// interval endpoints, so an integer grid 0..q-1 on [0, q-1] round-trips
// losslessly.
struct Quantizer {
    double lo;
    double hi;
    int q;

    Quantizer(double lo_, double hi_, int q_);

    int quantize(double v) const;        // clamps v into [lo, hi]
    double dequantize(int level) const;  // throws on level outside [0, q)
    double step() const { return (hi - lo) / static_cast<double>(q - 1); }
};

// Maps a level to its modulation symbol x[level].
struct Encoder {
    Eigen::VectorXcd x;

    explicit Encoder(Eigen::VectorXcd symbols);

    int q() const { return static_cast<int>(x.size()); }
    cxd encode(int level) const;
};

// Deduplicated receive constellation: one entry per merged point, carrying
// the mean output value of the classes that landed there.
struct DecoderTable {
    std::vector<cxd> points;
    std::vector<double> values;
    double epsilon;  // merge tolerance, relative to sqrt(P)

    static DecoderTable build(const Eigen::VectorXcd& x,
                              const std::vector<MultisetClass>& classes,
                              double epsilon);
};

struct DecodeResult {
    double value;
    int pointIndex;
    double distance;
};

// Nearest table point by Euclidean distance, ties to the lowest index.
DecodeResult decode(cxd y, const DecoderTable& table);

}  // namespace chancomp
