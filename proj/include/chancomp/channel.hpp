// Narrowband multiple-access channel: fading draws, channel-inversion power
// control, coherent superposition and AWGN, plus the seeded generator used
// everywhere randomness is needed.
#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "chancomp/modem.hpp"

namespace chancomp {

// Deterministic generator: mt19937_64 stream with hand-rolled Box-Muller
// normals so the draw sequence does not depend on the standard library's
// distribution implementations.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on (0, 1), never exactly 0 or 1.
    double uniform();

    // Uniform on [lo, hi] inclusive, via rejection.
    int uniform_int(int lo, int hi);

    double normal();        // N(0, 1)
    cxd complex_normal();   // CN(0, 1): variance 1/2 per real dimension

  private:
    std::mt19937_64 engine_;
    bool hasSpare_ = false;
    double spare_ = 0.0;
};

// Documented split rule for independent per-trial streams: the master seed
// is mixed with the run id, SNR index and trial index through splitmix64.
std::uint64_t splitmix64(std::uint64_t z);
std::uint64_t mix_seed(std::uint64_t master, std::uint64_t runId, std::uint64_t snrIndex,
                       std::uint64_t trialIndex);

enum class Fading { None, Rayleigh };

struct ChannelConfig {
    double sigmaZ = 0.0;     // total complex noise standard deviation
    Fading fading = Fading::None;
    double gainFloor = 0.05; // minimum |h| accepted for inversion
};

// sigma_z realizing SNR(dB) = 20 log10(xNorm / sigma_z).
double sigma_from_snr(double snrDb, double xNorm);

// none -> all-ones; rayleigh -> unit-variance circular Gaussian gains,
// redrawn while |h| < gainFloor.
std::vector<cxd> draw_fading(int K, const ChannelConfig& config, Rng& rng);

// Channel inversion p = conj(h)/|h|^2, so h*p = 1.
cxd power_control(cxd h, double gainFloor = 0.05);

// y = sum_k h_k p_k s_k + z with z ~ CN(0, sigmaZ^2).
cxd mac_transmit(std::span<const cxd> symbols, std::span<const cxd> h, std::span<const cxd> p,
                 double sigmaZ, Rng& rng);

}  // namespace chancomp
