#pragma once

#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "stbcsim/channel.hpp"
#include "stbcsim/constellation.hpp"
#include "stbcsim/decoder.hpp"
#include "stbcsim/montecarlo.hpp"
#include "stbcsim/report.hpp"
#include "stbcsim/rng.hpp"
#include "stbcsim/stbc.hpp"

// Fast invariant suite behind the `selftest` subcommand. Every check takes
// the algebraic constants as a parameter so a corrupted constant is caught by
// the frozen regression values rather than by re-deriving them.

namespace stbcsim {

struct SelftestCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

// Brute-force minimum |det(Ci - Cj)| over all unit-energy 4QAM Golden
// codeword pairs, frozen after independent validation; equals 2/sqrt(5).
inline constexpr double kMinDetQam4 = 0.8944271909999159;

namespace detail {

inline SelftestCheck check_constellation_energy() {
    SelftestCheck chk{"constellation-energy", true, ""};
    std::ostringstream os;
    for (std::size_t m : {2u, 4u, 16u}) {
        const auto c = build_constellation(m);
        const double e = c.average_energy();
        if (std::abs(e - 1.0) > 1e-12) chk.passed = false;
        os << constellation_token(m) << "=" << e << " ";
    }
    chk.detail = os.str();
    return chk;
}

inline SelftestCheck check_golden_constants(const GoldenParams& p) {
    SelftestCheck chk{"golden-constants", true, ""};
    const double norm_sum = std::norm(p.alpha) + std::norm(p.alpha_bar);
    const cplx prod = p.alpha * p.alpha_bar;
    chk.passed = std::abs(norm_sum - 5.0) <= 1e-12 && std::abs(prod - cplx{2.0, 1.0}) <= 1e-12 &&
                 std::abs(p.theta * p.theta_bar + 1.0) <= 1e-12 &&
                 std::abs(p.theta + p.theta_bar - 1.0) <= 1e-12;
    std::ostringstream os;
    os << "|a|^2+|ab|^2=" << norm_sum << " a*ab=(" << prod.real() << "," << prod.imag() << ")";
    chk.detail = os.str();
    return chk;
}

inline SelftestCheck check_min_det(const GoldenParams& p) {
    SelftestCheck chk{"min-det-regression", false, ""};
    std::ostringstream os;
    try {
        const double d = min_det_difference(build_constellation(4), p);
        chk.passed = std::abs(d - kMinDetQam4) <= 1e-12;
        os << "min|det|=" << d << " expected=" << kMinDetQam4;
    } catch (const std::exception& e) {
        os << e.what();
    }
    chk.detail = os.str();
    return chk;
}

inline SelftestCheck check_dispersion_linearity(const GoldenParams& p) {
    SelftestCheck chk{"dispersion-linearity", true, ""};
    double worst_encode = 0.0, worst_lattice = 0.0;
    const auto c = build_constellation(4);
    for (Scheme scheme : {Scheme::golden, Scheme::oriol}) {
        const auto a = dispersion_matrices(scheme, p);
        TrialRng rng(mix64(0x64697370 ^ static_cast<std::uint64_t>(scheme)));
        for (int it = 0; it < 100; ++it) {
            Symbols s;
            for (auto& v : s) v = rng.complex_gaussian(1.0);
            const CodewordMatrix direct = encode(scheme, s, p);
            CodewordMatrix sum;
            sum.scheme = scheme;
            for (std::size_t k = 0; k < 4; ++k)
                for (std::size_t e = 0; e < 8; ++e) sum.entries[e] += s[k] * a[k].entries[e];
            worst_encode = std::max(worst_encode, max_abs_diff(direct, sum));

            const auto ch = draw_channel(scheme, FadingModel{0.0}, rng);
            const Mat22c y = apply_channel(direct, ch);
            const auto prob = build_lattice(y, ch, c, p);
            Vec<8> x{};
            for (std::size_t k = 0; k < 4; ++k) {
                x[2 * k] = s[k].real();
                x[2 * k + 1] = s[k].imag();
            }
            const Vec<8> gx = matvec(prob.g, x);
            const Vec<8> yv = realvec(y);
            for (std::size_t i = 0; i < 8; ++i)
                worst_lattice = std::max(worst_lattice, std::abs(gx[i] - yv[i]));
        }
    }
    chk.passed = worst_encode <= 1e-12 && worst_lattice <= 1e-10;
    std::ostringstream os;
    os << "encode_err=" << worst_encode << " lattice_err=" << worst_lattice;
    chk.detail = os.str();
    return chk;
}

inline SelftestCheck check_sphere_equals_ml(const GoldenParams& p) {
    SelftestCheck chk{"sphere-equals-ml", true, ""};
    const auto c = build_constellation(4);
    std::size_t mismatches = 0;
    const std::size_t n = 1000;
    for (std::size_t i = 0; i < n; ++i) {
        const Scheme scheme = (i % 2 == 0) ? Scheme::golden : Scheme::oriol;
        const double rho = (i % 4 == 1) ? 0.5 : 0.0;
        TrialRng rng(derive_stream_key(0x73656c66, 1, i));
        Symbols s;
        std::array<std::size_t, 4> idx{};
        for (std::size_t k = 0; k < 4; ++k) {
            idx[k] = static_cast<std::size_t>(rng.next_u64() % c.order);
            s[k] = c.points[idx[k]];
        }
        const auto cw = encode(scheme, s, p);
        const auto ch = draw_channel(scheme, FadingModel{rho}, rng);
        const Mat22c y = add_noise(apply_channel(cw, ch), NoiseParams{0.2}, rng);
        const auto ml = ml_decode(y, ch, c, p);
        const auto sp = decode(y, ch, c, DecodeAlgorithm::sphere, p);
        const bool same_idx = ml.indices == sp.indices;
        const bool same_metric = std::abs(ml.metric - sp.metric) <= 1e-9 * (1.0 + ml.metric);
        if (!(same_idx && same_metric)) ++mismatches;
    }
    chk.passed = mismatches == 0;
    std::ostringstream os;
    os << mismatches << "/" << n << " mismatches";
    chk.detail = os.str();
    return chk;
}

inline SelftestCheck check_noiseless_zero_ber(const GoldenParams& p) {
    SelftestCheck chk{"noiseless-zero-ber", true, ""};
    std::uint64_t total_bit_errors = 0, total_trials = 0;
    for (Scheme scheme : {Scheme::golden, Scheme::oriol})
        for (std::size_t m : {2u, 4u, 16u}) {
            SimConfig cfg;
            cfg.scheme = scheme;
            cfg.mod_order = m;
            cfg.decoder = DecodeAlgorithm::sphere;
            cfg.max_trials = 200;
            cfg.target_bit_errors = 1;
            cfg.seed = 7;
            const auto c = build_constellation(m);
            const auto rec = run_point(cfg, c, 400.0, 0, p);
            total_bit_errors += rec.bit_errors;
            total_trials += rec.trials;
        }
    chk.passed = total_bit_errors == 0;
    std::ostringstream os;
    os << total_bit_errors << " bit errors in " << total_trials << " near-noiseless trials";
    chk.detail = os.str();
    return chk;
}

inline SelftestCheck check_seed_determinism(const GoldenParams& p) {
    SelftestCheck chk{"seed-determinism", true, ""};
    SimConfig cfg;
    cfg.scheme = Scheme::golden;
    cfg.mod_order = 4;
    cfg.snr_start = cfg.snr_stop = 8.0;
    cfg.snr_step = 1.0;
    cfg.decoder = DecodeAlgorithm::sphere;
    cfg.max_trials = 20000;
    cfg.target_bit_errors = 50;
    cfg.seed = 42;
    cfg.workers = 1;
    const auto first = csv_string(run_sweep(cfg, nullptr, p));
    const auto second = csv_string(run_sweep(cfg, nullptr, p));
    cfg.workers = 2;
    const auto threaded = csv_string(run_sweep(cfg, nullptr, p));
    chk.passed = first == second && first == threaded;
    chk.detail = chk.passed ? "identical csv across repeats and worker counts"
                            : "csv output differs between runs";
    return chk;
}

}  // namespace detail

inline std::vector<SelftestCheck> run_selftest(const GoldenParams& p = golden_params()) {
    std::vector<SelftestCheck> checks;
    checks.push_back(detail::check_constellation_energy());
    checks.push_back(detail::check_golden_constants(p));
    checks.push_back(detail::check_min_det(p));
    checks.push_back(detail::check_dispersion_linearity(p));
    checks.push_back(detail::check_sphere_equals_ml(p));
    checks.push_back(detail::check_noiseless_zero_ber(p));
    checks.push_back(detail::check_seed_determinism(p));
    return checks;
}

inline bool selftest_passed(const std::vector<SelftestCheck>& checks) {
    for (const auto& c : checks)
        if (!c.passed) return false;
    return true;
}

}  // namespace stbcsim
