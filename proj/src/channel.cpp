#include "chancomp/channel.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace chancomp {

double Rng::uniform() {
    // 53 random bits shifted into (0, 1); the +0.5 keeps log() safe.
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

int Rng::uniform_int(int lo, int hi) {
    if (lo > hi) throw std::invalid_argument("uniform_int needs lo <= hi");
    const std::uint64_t span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() / span * span;
    std::uint64_t draw;
    do {
        draw = engine_();
    } while (draw >= limit);
    return lo + static_cast<int>(draw % span);
}

double Rng::normal() {
    if (hasSpare_) {
        hasSpare_ = false;
        return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    hasSpare_ = true;
    return r * std::cos(a);
}

cxd Rng::complex_normal() {
    constexpr double invSqrt2 = 0.70710678118654752440;
    const double re = normal();
    const double im = normal();
    return cxd(re * invSqrt2, im * invSqrt2);
}

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

std::uint64_t mix_seed(std::uint64_t master, std::uint64_t runId, std::uint64_t snrIndex,
                       std::uint64_t trialIndex) {
    std::uint64_t s = splitmix64(master);
    s = splitmix64(s ^ runId);
    s = splitmix64(s ^ snrIndex);
    s = splitmix64(s ^ trialIndex);
    return s;
}

double sigma_from_snr(double snrDb, double xNorm) {
    if (!(xNorm > 0)) throw std::invalid_argument("sigma_from_snr needs xNorm > 0");
    return xNorm * std::pow(10.0, -snrDb / 20.0);
}

std::vector<cxd> draw_fading(int K, const ChannelConfig& config, Rng& rng) {
    std::vector<cxd> h(static_cast<std::size_t>(K), cxd(1, 0));
    if (config.fading == Fading::None) return h;
    for (auto& hk : h) {
        do {
            hk = rng.complex_normal();
        } while (std::abs(hk) < config.gainFloor);
    }
    return h;
}

cxd power_control(cxd h, double gainFloor) {
    const double mag2 = std::norm(h);
    if (std::sqrt(mag2) < gainFloor)
        throw std::domain_error("channel gain below inversion floor");
    return std::conj(h) / mag2;
}

cxd mac_transmit(std::span<const cxd> symbols, std::span<const cxd> h, std::span<const cxd> p,
                 double sigmaZ, Rng& rng) {
    if (symbols.size() != h.size() || symbols.size() != p.size())
        throw std::invalid_argument("symbol/gain/power lists must have equal length");
    cxd y(0, 0);
    for (std::size_t k = 0; k < symbols.size(); ++k) y += h[k] * p[k] * symbols[k];
    if (sigmaZ > 0) y += sigmaZ * rng.complex_normal();
    return y;
}

}  // namespace chancomp
