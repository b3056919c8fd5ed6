// Comparison schemes: analog AirComp with nomographic pre/post-processing,
// and per-node orthogonal OFDMA with decode-then-compute.
#pragma once

#include <functional>
#include <span>
#include <string>

#include "chancomp/channel.hpp"
#include "chancomp/function.hpp"
#include "chancomp/modem.hpp"

namespace chancomp {

// f = psi(sum_k phi(x_k)). The max kind uses the smooth log-sum-exp
// approximation exp(t v) / log(u)/t; product clamps inputs below delta
// before the log.
struct NomographicMap {
    std::string kind;  // sum | product | max | quadratic
    std::function<double(double)> phi;
    // psi(u, clamped): clamped is set when u lies outside psi's domain and
    // the result had to be pinned.
    std::function<double(double, bool&)> psi;
    double peakMagnitude = 0.0;  // max |phi| over the input interval
};

struct AircompParams {
    double delta = 1e-3;        // product clamp before the log
    double tempScale = 10.0;    // max temperature t = tempScale / (hi - lo)
};

NomographicMap make_nomographic(const std::string& kind, double lo, double hi,
                                const AircompParams& params = {});

struct AircompResult {
    double value = 0.0;
    bool clamped = false;
};

// Analog estimate: transmit scale*phi(x_k) coherently, add real Gaussian
// noise of std sigmaZ, return psi(y / scale).
AircompResult aircomp_estimate(std::span<const double> values, const NomographicMap& map,
                               double sigmaZ, double scale, Rng& rng);

// Per-node orthogonal channels: each node's symbol sees its own complex
// AWGN draw, is decoded to the nearest symbol (ties to the lowest level),
// and f is evaluated on the decoded levels. Uses K channel uses.
double ofdma_estimate(std::span<const int> levels, const Encoder& encoder,
                      const FunctionSpec& spec, double sigmaZ, Rng& rng);

}  // namespace chancomp
