#pragma once

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <future>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "stbcsim/channel.hpp"
#include "stbcsim/constellation.hpp"
#include "stbcsim/decoder.hpp"
#include "stbcsim/rng.hpp"
#include "stbcsim/stbc.hpp"

// Seeded Monte Carlo BER/SER sweeps. Every trial draws its randomness from a
// stream keyed by (master_seed, snr_index, trial_index), so results are
// reproducible bit for bit regardless of worker count or scheduling, and two
// schemes run with the same seed see identical bits, fading, and noise
// (common random numbers).

namespace stbcsim {

struct SimConfig {
    Scheme scheme = Scheme::golden;
    std::size_t mod_order = 4;
    double snr_start = 0.0;
    double snr_step = 2.0;
    double snr_stop = 20.0;
    DecodeAlgorithm decoder = DecodeAlgorithm::sphere;
    std::uint64_t max_trials = 1000000;
    std::uint64_t target_bit_errors = 100;
    std::uint64_t seed = 1;
    double rho = 0.0;
    unsigned workers = 1;

    void validate() const {
        if (mod_order != 2 && mod_order != 4 && mod_order != 16)
            throw std::invalid_argument("modulation order must be 2, 4, or 16");
        if (!(snr_step > 0.0))
            throw std::invalid_argument("snr step must be positive");
        if (!(snr_start <= snr_stop))
            throw std::invalid_argument("snr range is inverted");
        if (max_trials < 1) throw std::invalid_argument("max_trials must be at least 1");
        if (target_bit_errors < 1)
            throw std::invalid_argument("target_bit_errors must be at least 1");
        if (workers < 1) throw std::invalid_argument("workers must be at least 1");
        FadingModel{rho}.validate();
    }

    std::vector<double> snr_grid() const {
        const auto n =
            static_cast<std::size_t>(std::floor((snr_stop - snr_start) / snr_step + 1e-9)) + 1;
        std::vector<double> grid(n);
        for (std::size_t i = 0; i < n; ++i) grid[i] = snr_start + snr_step * static_cast<double>(i);
        return grid;
    }
};

struct BerRecord {
    Scheme scheme = Scheme::golden;
    std::size_t mod_order = 4;
    double snr_db = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t bit_errors = 0;
    double ber = 0.0;
    std::uint64_t symbol_errors = 0;
    double ser = 0.0;
    std::uint64_t codeword_errors = 0;
    std::uint64_t fallback_trials = 0;
    double elapsed = 0.0;  // wall seconds for the point; not part of deterministic output
    DecodeAlgorithm decoder = DecodeAlgorithm::sphere;
    double rho = 0.0;
    std::uint64_t seed = 0;
};

struct TrialCounts {
    std::uint64_t bit_errors = 0;
    std::uint64_t symbol_errors = 0;
    std::uint64_t codeword_errors = 0;
    std::uint64_t fallback_trials = 0;

    TrialCounts& operator+=(const TrialCounts& o) {
        bit_errors += o.bit_errors;
        symbol_errors += o.symbol_errors;
        codeword_errors += o.codeword_errors;
        fallback_trials += o.fallback_trials;
        return *this;
    }
};

// Early stopping is censused on fixed batch boundaries, never mid-batch, so
// the set of executed trials depends only on the accumulated counts.
inline constexpr std::uint64_t kTrialBatch = 4096;

inline TrialCounts run_trial(const SimConfig& cfg, const Constellation& c, double snr_db,
                             std::size_t snr_index, std::uint64_t trial_index,
                             const GoldenParams& p = golden_params()) {
    const std::uint64_t key = derive_stream_key(cfg.seed, snr_index, trial_index);
    TrialRng bit_rng(mix64(key ^ kBitStream));
    TrialRng channel_rng(mix64(key ^ kChannelStream));
    TrialRng noise_rng(mix64(key ^ kNoiseStream));

    const std::size_t bps = c.bits_per_symbol;
    std::array<std::size_t, 4> sent{};
    std::array<cplx, 4> symbols{};
    for (std::size_t k = 0; k < 4; ++k) {
        std::size_t label = 0;
        for (std::size_t b = 0; b < bps; ++b) label = (label << 1) | bit_rng.bit();
        sent[k] = c.index_from_label[label];
        symbols[k] = c.points[sent[k]];
    }

    const CodewordMatrix cw = encode(cfg.scheme, symbols, p);
    const ChannelRealization ch = draw_channel(cfg.scheme, FadingModel{cfg.rho}, channel_rng);
    const Mat22c clean = apply_channel(cw, ch);
    const Mat22c received = add_noise(clean, snr_to_n0(snr_db, cfg.scheme), noise_rng);

    const DecodeResult res = decode(received, ch, c, cfg.decoder, p);

    TrialCounts counts;
    for (std::size_t k = 0; k < 4; ++k) {
        if (res.indices[k] == sent[k]) continue;
        ++counts.symbol_errors;
        const auto diff = c.label(sent[k]) ^ c.label(res.indices[k]);
        counts.bit_errors += static_cast<std::uint64_t>(std::popcount(diff));
    }
    if (counts.symbol_errors > 0) counts.codeword_errors = 1;
    if (res.used_fallback) counts.fallback_trials = 1;
    return counts;
}

namespace detail {

inline TrialCounts run_range(const SimConfig& cfg, const Constellation& c, double snr_db,
                             std::size_t snr_index, std::uint64_t first, std::uint64_t last,
                             const GoldenParams& p) {
    TrialCounts counts;
    for (std::uint64_t t = first; t < last; ++t)
        counts += run_trial(cfg, c, snr_db, snr_index, t, p);
    return counts;
}

}  // namespace detail

inline BerRecord run_point(const SimConfig& cfg, const Constellation& c, double snr_db,
                           std::size_t snr_index, const GoldenParams& p = golden_params()) {
    const auto start_time = std::chrono::steady_clock::now();
    TrialCounts totals;
    std::uint64_t trials = 0;
    while (trials < cfg.max_trials && totals.bit_errors < cfg.target_bit_errors) {
        const std::uint64_t batch = std::min(kTrialBatch, cfg.max_trials - trials);
        const std::uint64_t lo = trials;
        const std::uint64_t hi = trials + batch;
        if (cfg.workers == 1) {
            totals += detail::run_range(cfg, c, snr_db, snr_index, lo, hi, p);
        } else {
            const std::uint64_t per = (batch + cfg.workers - 1) / cfg.workers;
            std::vector<std::future<TrialCounts>> parts;
            parts.reserve(cfg.workers);
            for (unsigned w = 0; w < cfg.workers; ++w) {
                const std::uint64_t a = std::min(hi, lo + per * w);
                const std::uint64_t b = std::min(hi, a + per);
                if (a >= b) break;
                parts.push_back(std::async(std::launch::async, detail::run_range, std::cref(cfg),
                                           std::cref(c), snr_db, snr_index, a, b, std::cref(p)));
            }
            for (auto& f : parts) totals += f.get();
        }
        trials = hi;
    }

    BerRecord rec;
    rec.scheme = cfg.scheme;
    rec.mod_order = cfg.mod_order;
    rec.snr_db = snr_db;
    rec.trials = trials;
    rec.bit_errors = totals.bit_errors;
    rec.symbol_errors = totals.symbol_errors;
    rec.codeword_errors = totals.codeword_errors;
    rec.fallback_trials = totals.fallback_trials;
    const double bits = static_cast<double>(trials) * 4.0 * static_cast<double>(c.bits_per_symbol);
    rec.ber = static_cast<double>(totals.bit_errors) / bits;
    rec.ser = static_cast<double>(totals.symbol_errors) / (static_cast<double>(trials) * 4.0);
    rec.decoder = cfg.decoder;
    rec.rho = cfg.rho;
    rec.seed = cfg.seed;
    rec.elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_time).count();
    return rec;
}

inline std::vector<BerRecord> run_sweep(const SimConfig& cfg, std::ostream* progress = nullptr,
                                        const GoldenParams& p = golden_params()) {
    cfg.validate();
    const Constellation c = build_constellation(cfg.mod_order);
    const auto grid = cfg.snr_grid();
    std::vector<BerRecord> records;
    records.reserve(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        records.push_back(run_point(cfg, c, grid[i], i, p));
        if (progress) {
            const auto& r = records.back();
            *progress << scheme_token(cfg.scheme) << ' ' << constellation_token(cfg.mod_order)
                      << " snr=" << r.snr_db << " dB trials=" << r.trials
                      << " bit_errors=" << r.bit_errors << " ber=" << r.ber << '\n';
        }
    }
    return records;
}

namespace detail {

// SNR at which a curve crosses the target, by interpolation linear in dB and
// in log10(BER). Requires an adjacent bracketing pair with >= 100 bit errors
// at both ends.
inline double snr_at_ber(const std::vector<BerRecord>& records, double target_ber,
                         const char* curve_name) {
    constexpr std::uint64_t kMinErrors = 100;
    double lo_ber = 1.0, hi_ber = 0.0;
    for (const auto& r : records) {
        lo_ber = std::min(lo_ber, r.ber);
        hi_ber = std::max(hi_ber, r.ber);
    }
    for (std::size_t i = 0; i + 1 < records.size(); ++i) {
        const auto& a = records[i];
        const auto& b = records[i + 1];
        if (a.ber < target_ber || b.ber > target_ber) continue;
        if (a.ber <= 0.0 || b.ber <= 0.0) continue;
        if (a.bit_errors < kMinErrors || b.bit_errors < kMinErrors) continue;
        if (a.ber == b.ber) return a.snr_db;
        const double la = std::log10(a.ber);
        const double lb = std::log10(b.ber);
        const double lt = std::log10(target_ber);
        return a.snr_db + (lt - la) * (b.snr_db - a.snr_db) / (lb - la);
    }
    throw std::runtime_error(std::string("insufficient range: curve ") + curve_name +
                             " has no bracketing pair with at least 100 bit errors around ber=" +
                             std::to_string(target_ber) + " (observed ber span " +
                             std::to_string(lo_ber) + " .. " + std::to_string(hi_ber) + ")");
}

}  // namespace detail

// Horizontal distance between two BER curves at the target: positive when
// curve b reaches the target at a lower SNR than curve a.
inline double gain_at_ber(const std::vector<BerRecord>& records_a,
                          const std::vector<BerRecord>& records_b, double target_ber) {
    if (!(target_ber > 0.0 && target_ber < 1.0))
        throw std::invalid_argument("target ber must lie in (0, 1)");
    const double snr_a = detail::snr_at_ber(records_a, target_ber, "a");
    const double snr_b = detail::snr_at_ber(records_b, target_ber, "b");
    return snr_a - snr_b;
}

}  // namespace stbcsim
