#include "chancomp/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace chancomp {

NomographicMap make_nomographic(const std::string& kind, double lo, double hi,
                                const AircompParams& params) {
    if (!(lo < hi)) throw std::invalid_argument("nomographic map needs lo < hi");
    NomographicMap map;
    map.kind = kind;
    if (kind == "sum") {
        map.phi = [](double v) { return v; };
        map.psi = [](double u, bool&) { return u; };
        map.peakMagnitude = std::max(std::abs(lo), std::abs(hi));
    } else if (kind == "quadratic") {
        map.phi = [](double v) { return v * v; };
        map.psi = [](double u, bool&) { return u; };
        map.peakMagnitude = std::max(lo * lo, hi * hi);
    } else if (kind == "product") {
        const double delta = params.delta;
        if (!(delta > 0)) throw std::invalid_argument("product clamp delta must be positive");
        map.phi = [delta](double v) { return std::log(std::max(v, delta)); };
        map.psi = [](double u, bool&) { return std::exp(u); };
        map.peakMagnitude = std::max(std::abs(std::log(delta)),
                                     std::abs(std::log(std::max(hi, delta))));
    } else if (kind == "max") {
        const double t = params.tempScale / (hi - lo);
        map.phi = [t](double v) { return std::exp(t * v); };
        map.psi = [t, lo](double u, bool& clamped) {
            if (u <= 0) {
                clamped = true;
                return lo;
            }
            return std::log(u) / t;
        };
        map.peakMagnitude = std::exp(t * hi);
    } else {
        throw std::invalid_argument("no nomographic map for function kind: " + kind);
    }
    return map;
}

AircompResult aircomp_estimate(std::span<const double> values, const NomographicMap& map,
                               double sigmaZ, double scale, Rng& rng) {
    if (!(scale > 0)) throw std::invalid_argument("aircomp transmit scale must be positive");
    double y = 0.0;
    for (double v : values) y += scale * map.phi(v);
    if (sigmaZ > 0) y += sigmaZ * rng.normal();
    AircompResult result;
    result.value = map.psi(y / scale, result.clamped);
    return result;
}

double ofdma_estimate(std::span<const int> levels, const Encoder& encoder,
                      const FunctionSpec& spec, double sigmaZ, Rng& rng) {
    if (static_cast<int>(levels.size()) != spec.K)
        throw std::invalid_argument("level tuple arity must match the function");
    std::vector<int> decoded(levels.size());
    for (std::size_t k = 0; k < levels.size(); ++k) {
        cxd y = encoder.encode(levels[k]);
        if (sigmaZ > 0) y += sigmaZ * rng.complex_normal();
        int best = 0;
        double bestDist = std::abs(y - encoder.x(0));
        for (int l = 1; l < encoder.q(); ++l) {
            const double d = std::abs(y - encoder.x(l));
            if (d < bestDist) {
                bestDist = d;
                best = l;
            }
        }
        decoded[k] = best;
    }
    return spec.evaluator(decoded);
}

}  // namespace chancomp
