#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "stbcsim/linalg.hpp"

// Counter-style stream derivation for reproducible parallel Monte Carlo.
// Every (master_seed, snr_index, trial_index) tuple owns an independent
// random stream, so results never depend on worker count or scheduling.

namespace stbcsim {

// splitmix64 finalizer (Vigna). Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t derive_stream_key(std::uint64_t master_seed, std::uint64_t snr_index,
                                          std::uint64_t trial_index) {
    std::uint64_t k = mix64(master_seed);
    k = mix64(k ^ snr_index);
    k = mix64(k ^ trial_index);
    return k;
}

// Sub-stream tags within one trial. Keeping bits, fading and noise on
// separate streams aligns fading and noise across schemes when two runs
// share a seed (common random numbers).
inline constexpr std::uint64_t kBitStream = 0x62697473ULL;      // "bits"
inline constexpr std::uint64_t kChannelStream = 0x66616465ULL;  // "fade"
inline constexpr std::uint64_t kNoiseStream = 0x6e6f6973ULL;    // "nois"

class TrialRng {
  public:
    explicit TrialRng(std::uint64_t key) : gen_(key) {}

    TrialRng(std::uint64_t key, std::uint64_t substream) : gen_(mix64(key ^ substream)) {}

    std::uint64_t next_u64() { return gen_(); }

    int bit() { return static_cast<int>(next_u64() >> 63); }

    // Uniform on (0, 1]; never returns 0, so log() is safe.
    double uniform_pos() { return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; }

    // Standard normal via Box-Muller; consumes two uniforms per pair.
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform_pos();
        const double u2 = uniform_pos();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * 3.141592653589793238462643383279502884 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    // Circularly-symmetric complex Gaussian with E|z|^2 = variance.
    cplx complex_gaussian(double variance) {
        const double s = std::sqrt(variance * 0.5);
        const double re = gaussian();
        const double im = gaussian();
        return {re * s, im * s};
    }

  private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace stbcsim
