#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "stbcsim/channel.hpp"
#include "stbcsim/rng.hpp"

using namespace stbcsim;

TEST_CASE("correlation parameter is validated", "[channel]") {
    CHECK_NOTHROW(FadingModel{0.0}.validate());
    CHECK_NOTHROW(FadingModel{1.0}.validate());
    CHECK_THROWS_AS(FadingModel{-0.1}.validate(), std::invalid_argument);
    CHECK_THROWS_AS(FadingModel{1.1}.validate(), std::invalid_argument);
}

TEST_CASE("golden channel reuses one matrix across both slots", "[channel]") {
    TrialRng rng(mix64(1));
    const auto ch = draw_channel(Scheme::golden, FadingModel{0.0}, rng);
    CHECK(max_abs_diff(ch.h1, ch.h2) == 0.0);
    CHECK(ch.slot(0).e == ch.slot(1).e);
}

TEST_CASE("fully correlated polarization states collapse to one draw", "[channel]") {
    TrialRng rng(mix64(2));
    const auto ch = draw_channel(Scheme::oriol, FadingModel{1.0}, rng);
    CHECK(max_abs_diff(ch.h1, ch.h2) < 1e-15);
}

TEST_CASE("channel statistics match the fading model", "[channel]") {
    const std::size_t n = 100000;
    for (double rho : {0.0, 0.5}) {
        TrialRng rng(mix64(0xfade + static_cast<std::uint64_t>(rho * 10)));
        double e1 = 0.0, e2 = 0.0, cross = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const auto ch = draw_channel(Scheme::oriol, FadingModel{rho}, rng);
            for (std::size_t k = 0; k < 4; ++k) {
                e1 += std::norm(ch.h1.e[k]);
                e2 += std::norm(ch.h2.e[k]);
                cross += ch.h1.e[k].real() * ch.h2.e[k].real() +
                         ch.h1.e[k].imag() * ch.h2.e[k].imag();
            }
        }
        const double denom = static_cast<double>(4 * n);
        CHECK(std::abs(e1 / denom - 1.0) < 0.02);
        CHECK(std::abs(e2 / denom - 1.0) < 0.02);
        // cross / denom estimates rho * E|h|^2 (real correlation coefficient).
        CHECK(std::abs(cross / denom - rho) < 0.02);
    }
}

TEST_CASE("received rows combine the active entries with the slot channel", "[channel]") {
    TrialRng rng(mix64(3));
    Symbols s;
    for (auto& v : s) v = rng.complex_gaussian(1.0);

    const auto golden_cw = encode_golden(s);
    ChannelRealization ident{Scheme::golden, {}, {}};
    ident.h1(0, 0) = ident.h1(1, 1) = 1.0;
    ident.h2 = ident.h1;
    const auto y_ident = apply_channel(golden_cw, ident);
    for (std::size_t t = 0; t < 2; ++t)
        for (std::size_t r = 0; r < 2; ++r) CHECK(y_ident(t, r) == golden_cw.at(t, r));

    const auto oriol_cw = encode_oriol(s);
    const auto ch = draw_channel(Scheme::oriol, FadingModel{0.3}, rng);
    const auto y = apply_channel(oriol_cw, ch);
    for (std::size_t r = 0; r < 2; ++r) {
        const cplx want0 = oriol_cw.at(0, 0) * ch.h1(0, r) + oriol_cw.at(0, 1) * ch.h1(1, r);
        const cplx want1 = oriol_cw.at(1, 2) * ch.h2(0, r) + oriol_cw.at(1, 3) * ch.h2(1, r);
        CHECK(std::abs(y(0, r) - want0) < 1e-15);
        CHECK(std::abs(y(1, r) - want1) < 1e-15);
    }
}

TEST_CASE("block-diagonal reception is the literal stacked matrix product", "[channel]") {
    TrialRng rng(mix64(7));
    Symbols s;
    for (auto& v : s) v = rng.complex_gaussian(1.0);
    const auto cw = encode_oriol(s);
    const auto ch = draw_channel(Scheme::oriol, FadingModel{0.4}, rng);
    const auto y = apply_channel(cw, ch);

    cplx stacked[4][2];
    for (std::size_t n = 0; n < 2; ++n)
        for (std::size_t r = 0; r < 2; ++r) {
            stacked[n][r] = ch.h1(n, r);
            stacked[n + 2][r] = ch.h2(n, r);
        }
    for (std::size_t t = 0; t < 2; ++t)
        for (std::size_t r = 0; r < 2; ++r) {
            cplx want{};
            for (std::size_t c = 0; c < 4; ++c) want += cw.at(t, c) * stacked[c][r];
            CHECK(std::abs(y(t, r) - want) < 1e-14);
        }
}

TEST_CASE("scheme mismatch between codeword and channel is rejected", "[channel]") {
    TrialRng rng(mix64(4));
    Symbols s;
    for (auto& v : s) v = rng.complex_gaussian(1.0);
    const auto cw = encode_golden(s);
    const auto ch = draw_channel(Scheme::oriol, FadingModel{0.0}, rng);
    CHECK_THROWS_AS(apply_channel(cw, ch), std::invalid_argument);
}

TEST_CASE("noise level follows the SNR definition", "[channel]") {
    CHECK(std::abs(snr_to_n0(0.0, Scheme::golden).n0 - 2.0) < 1e-15);
    CHECK(std::abs(snr_to_n0(10.0, Scheme::golden).n0 - 0.2) < 1e-15);
    CHECK(std::abs(snr_to_n0(20.0, Scheme::oriol).n0 - 0.02) < 1e-15);
}

TEST_CASE("additive noise has the configured per-entry variance", "[channel]") {
    TrialRng rng(mix64(5));
    const double n0 = 0.37;
    const std::size_t n = 100000;
    double power = 0.0;
    cplx mean{};
    const Mat22c zero{};
    for (std::size_t i = 0; i < n; ++i) {
        const auto y = add_noise(zero, NoiseParams{n0}, rng);
        for (std::size_t k = 0; k < 4; ++k) {
            power += std::norm(y.e[k]);
            mean += y.e[k];
        }
    }
    CHECK(std::abs(power / static_cast<double>(4 * n) - n0) < 0.02 * n0);
    CHECK(std::abs(mean) / static_cast<double>(4 * n) < 0.005);
}

TEST_CASE("empirical received SNR matches the configured value", "[channel]") {
    const std::size_t n = 100000;
    for (Scheme scheme : {Scheme::golden, Scheme::oriol}) {
        TrialRng rng(mix64(6 + static_cast<std::uint64_t>(scheme)));
        const double snr_db = 10.0;
        const NoiseParams noise = snr_to_n0(snr_db, scheme);
        double sig = 0.0, npow = 0.0;
        const auto c = build_constellation(4);
        for (std::size_t i = 0; i < n; ++i) {
            Symbols s;
            for (auto& v : s) v = c.points[rng.next_u64() % 4];
            const auto cw = encode(scheme, s);
            const auto ch = draw_channel(scheme, FadingModel{0.0}, rng);
            const auto clean = apply_channel(cw, ch);
            const auto noisy = add_noise(Mat22c{}, noise, rng);
            sig += frobenius_norm_sq(clean);
            npow += frobenius_norm_sq(noisy);
        }
        const double measured = sig / npow;
        CHECK(std::abs(measured / std::pow(10.0, snr_db / 10.0) - 1.0) < 0.03);
    }
}
