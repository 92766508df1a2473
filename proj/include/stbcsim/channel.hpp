#pragma once

#include <cmath>
#include <stdexcept>

#include "stbcsim/linalg.hpp"
#include "stbcsim/rng.hpp"
#include "stbcsim/stbc.hpp"

// Quasi-static Rayleigh block fading with two receive antennas. The golden
// scheme sees one fading matrix for the whole codeword; the oriol scheme sees
// one matrix per slot (one per polarization state), with cross-state
// correlation rho.

namespace stbcsim {

struct FadingModel {
    double rho = 0.0;  // correlation between the state-1 and state-2 branches

    void validate() const {
        if (!(rho >= 0.0 && rho <= 1.0))
            throw std::invalid_argument("xpd correlation rho must lie in [0, 1]");
    }
};

struct NoiseParams {
    double n0 = 1.0;  // per-entry complex noise variance (n0/2 per real part)
};

struct ChannelRealization {
    Scheme scheme = Scheme::golden;
    Mat22c h1;  // slot 1 fading (golden: both slots)
    Mat22c h2;  // slot 2 fading (golden: identical to h1)

    const Mat22c& slot(std::size_t t) const { return t == 0 ? h1 : h2; }
};

inline ChannelRealization draw_channel(Scheme scheme, const FadingModel& model, TrialRng& rng) {
    ChannelRealization ch;
    ch.scheme = scheme;
    for (std::size_t r = 0; r < 2; ++r)
        for (std::size_t c = 0; c < 2; ++c) ch.h1(r, c) = rng.complex_gaussian(1.0);
    if (scheme == Scheme::golden) {
        ch.h2 = ch.h1;
    } else {
        const double rho = model.rho;
        const double ind = std::sqrt(1.0 - rho * rho);
        for (std::size_t r = 0; r < 2; ++r)
            for (std::size_t c = 0; c < 2; ++c)
                ch.h2(r, c) = rho * ch.h1(r, c) + ind * rng.complex_gaussian(1.0);
    }
    return ch;
}

// Noiseless received matrix, one row per slot: row t = active_row(t) * H_t.
// For golden this is the plain product C*H.
inline Mat22c apply_channel(const CodewordMatrix& cw, const ChannelRealization& ch) {
    if (cw.scheme != ch.scheme)
        throw std::invalid_argument("codeword and channel realization use different schemes");
    Mat22c y;
    for (std::size_t t = 0; t < 2; ++t) {
        const auto row = cw.active_row(t);
        const auto& h = ch.slot(t);
        for (std::size_t r = 0; r < 2; ++r) y(t, r) = row[0] * h(0, r) + row[1] * h(1, r);
    }
    return y;
}

// Noise level for a target average received SNR per receive antenna per
// channel use. Two unit-mean-energy entries radiate per slot for either
// scheme, so the received signal power per entry is 2 and the calibration is
// scheme-independent (fairness).
inline NoiseParams snr_to_n0(double snr_db, Scheme /*scheme*/) {
    return NoiseParams{2.0 * std::pow(10.0, -snr_db / 10.0)};
}

inline Mat22c add_noise(const Mat22c& y0, const NoiseParams& n, TrialRng& rng) {
    Mat22c y = y0;
    for (std::size_t t = 0; t < 2; ++t)
        for (std::size_t r = 0; r < 2; ++r) y(t, r) += rng.complex_gaussian(n.n0);
    return y;
}

}  // namespace stbcsim
