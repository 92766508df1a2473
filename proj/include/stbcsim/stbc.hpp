#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "stbcsim/constellation.hpp"
#include "stbcsim/linalg.hpp"

// Golden space-time block code and its space-time-polarization variant.
//
// The Golden encoder maps four information symbols onto a 2x2 codeword sent
// from two antennas over two slots. The "oriol" variant splits the same
// codeword into two 1x2 sub-codewords and schedules them over four virtual
// antennas (two feed ports x two polarization states), two of which radiate
// per slot; its codeword is the 2x4 block-diagonal arrangement of the
// sub-codewords.

namespace stbcsim {

enum class Scheme { golden, oriol };

inline const char* scheme_token(Scheme s) { return s == Scheme::golden ? "golden" : "oriol"; }

inline Scheme scheme_from_token(std::string_view token) {
    if (token == "golden") return Scheme::golden;
    if (token == "oriol") return Scheme::oriol;
    throw std::invalid_argument("unknown scheme token '" + std::string(token) +
                                "'; expected golden or oriol");
}

struct GoldenParams {
    double theta;      // (1 + sqrt 5) / 2
    double theta_bar;  // (1 - sqrt 5) / 2
    cplx alpha;        // 1 + j(1 - theta)
    cplx alpha_bar;    // 1 + j(1 - theta_bar)
    cplx gamma;        // e^{j pi/2}
};

inline GoldenParams golden_params() {
    GoldenParams p;
    const double s5 = std::sqrt(5.0);
    p.theta = (1.0 + s5) / 2.0;
    p.theta_bar = (1.0 - s5) / 2.0;
    p.alpha = cplx{1.0, 1.0 - p.theta};
    p.alpha_bar = cplx{1.0, 1.0 - p.theta_bar};
    p.gamma = cplx{0.0, 1.0};
    return p;
}

// T x M codeword, row per time slot. golden: 2x2, oriol: 2x4 with the
// block-diagonal zero pattern (row 1 active in columns 1-2, row 2 in 3-4).
struct CodewordMatrix {
    Scheme scheme = Scheme::golden;
    std::array<cplx, 8> entries{};  // row-major, 2 x ncols()

    std::size_t nrows() const { return 2; }
    std::size_t ncols() const { return scheme == Scheme::golden ? 2 : 4; }

    cplx& at(std::size_t r, std::size_t c) { return entries[r * ncols() + c]; }
    const cplx& at(std::size_t r, std::size_t c) const { return entries[r * ncols() + c]; }

    // The two entries actually radiated in the given slot.
    std::array<cplx, 2> active_row(std::size_t slot) const {
        if (scheme == Scheme::golden || slot == 0) return {at(slot, 0), at(slot, 1)};
        return {at(1, 2), at(1, 3)};
    }

    double frobenius_norm_sq() const {
        double s = 0.0;
        const std::size_t n = nrows() * ncols();
        for (std::size_t i = 0; i < n; ++i) s += std::norm(entries[i]);
        return s;
    }
};

inline double max_abs_diff(const CodewordMatrix& a, const CodewordMatrix& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.entries.size(); ++i)
        d = std::max(d, std::abs(a.entries[i] - b.entries[i]));
    return d;
}

using Symbols = std::array<cplx, 4>;
using SubCodeword = std::array<cplx, 2>;

// Sub-codewords C1, C2 without the 1/sqrt(5) factor; the full encoders own
// the normalization.
inline std::pair<SubCodeword, SubCodeword> split_subcodewords(const Symbols& s,
                                                              const GoldenParams& p = golden_params()) {
    SubCodeword c1{p.alpha * (s[0] + p.theta * s[1]), p.alpha * (s[2] + p.theta * s[3])};
    SubCodeword c2{p.gamma * p.alpha_bar * (s[2] + p.theta_bar * s[3]),
                   p.alpha_bar * (s[0] + p.theta_bar * s[1])};
    return {c1, c2};
}

inline CodewordMatrix encode_golden(const Symbols& s, const GoldenParams& p = golden_params()) {
    const double inv_s5 = 1.0 / std::sqrt(5.0);
    const auto [c1, c2] = split_subcodewords(s, p);
    CodewordMatrix cw;
    cw.scheme = Scheme::golden;
    cw.at(0, 0) = inv_s5 * c1[0];
    cw.at(0, 1) = inv_s5 * c1[1];
    cw.at(1, 0) = inv_s5 * c2[0];
    cw.at(1, 1) = inv_s5 * c2[1];
    return cw;
}

inline CodewordMatrix encode_oriol(const Symbols& s, const GoldenParams& p = golden_params()) {
    const double inv_s5 = 1.0 / std::sqrt(5.0);
    const auto [c1, c2] = split_subcodewords(s, p);
    CodewordMatrix cw;
    cw.scheme = Scheme::oriol;
    cw.at(0, 0) = inv_s5 * c1[0];
    cw.at(0, 1) = inv_s5 * c1[1];
    cw.at(1, 2) = inv_s5 * c2[0];
    cw.at(1, 3) = inv_s5 * c2[1];
    return cw;
}

inline CodewordMatrix encode(Scheme scheme, const Symbols& s,
                             const GoldenParams& p = golden_params()) {
    return scheme == Scheme::golden ? encode_golden(s, p) : encode_oriol(s, p);
}

// Linear-dispersion form: encode(s) == sum_k s[k] * A[k] for all s.
using DispersionSet = std::array<CodewordMatrix, 4>;

inline DispersionSet dispersion_matrices(Scheme scheme, const GoldenParams& p = golden_params()) {
    DispersionSet a;
    for (std::size_t k = 0; k < 4; ++k) {
        Symbols unit{};
        unit[k] = cplx{1.0, 0.0};
        a[k] = encode(scheme, unit, p);
    }
    return a;
}

// One cell of the Table-style transmission policy: which (port, state) pair
// carries which codeword entry in which slot, "off" elsewhere.
struct ScheduleEntry {
    unsigned slot;   // 1 or 2
    unsigned port;   // n in {1, 2}
    unsigned state;  // p in {1, 2}
    std::string payload;  // symbolic entry or "off"

    bool active() const { return payload != "off"; }
    // Virtual-antenna column for this (port, state) pair, 0-based.
    std::size_t column() const { return 2 * (state - 1) + (port - 1); }
};

using AntennaSchedule = std::vector<ScheduleEntry>;

// Slot 1 radiates state 1 on both ports, slot 2 radiates state 2; the other
// four (slot, port, state) cells are off.
inline AntennaSchedule antenna_schedule() {
    AntennaSchedule t;
    t.push_back({1, 1, 1, "alpha*(s1 + theta*s2)"});
    t.push_back({1, 2, 1, "alpha*(s3 + theta*s4)"});
    t.push_back({1, 1, 2, "off"});
    t.push_back({1, 2, 2, "off"});
    t.push_back({2, 1, 1, "off"});
    t.push_back({2, 2, 1, "off"});
    t.push_back({2, 1, 2, "gamma*alpha_bar*(s3 + theta_bar*s4)"});
    t.push_back({2, 2, 2, "alpha_bar*(s1 + theta_bar*s2)"});
    return t;
}

struct EnumeratedCodeword {
    std::array<std::size_t, 4> indices;
    CodewordMatrix codeword;
};

// All m^4 codewords in lexicographic index order.
inline std::vector<EnumeratedCodeword> enumerate_codewords(const Constellation& c, Scheme scheme,
                                                           const GoldenParams& p = golden_params()) {
    const std::size_t m = c.order;
    std::vector<EnumeratedCodeword> out;
    out.reserve(m * m * m * m);
    for (std::size_t i1 = 0; i1 < m; ++i1)
        for (std::size_t i2 = 0; i2 < m; ++i2)
            for (std::size_t i3 = 0; i3 < m; ++i3)
                for (std::size_t i4 = 0; i4 < m; ++i4) {
                    const Symbols s{c.points[i1], c.points[i2], c.points[i3], c.points[i4]};
                    out.push_back({{i1, i2, i3, i4}, encode(scheme, s, p)});
                }
    return out;
}

namespace detail {

inline double abs_det2(const cplx& a, const cplx& b, const cplx& c, const cplx& d) {
    return std::abs(a * d - b * c);
}

}  // namespace detail

// Minimum |det(Ci - Cj)| over all ordered pairs of distinct Golden codewords.
// Zero would indicate a broken encoder, not a property of the code.
inline double min_det_difference(const Constellation& c, const GoldenParams& p = golden_params()) {
    const auto cws = enumerate_codewords(c, Scheme::golden, p);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < cws.size(); ++i) {
        const auto& a = cws[i].codeword;
        for (std::size_t j = 0; j < cws.size(); ++j) {
            if (i == j) continue;
            const auto& b = cws[j].codeword;
            const double d = detail::abs_det2(a.at(0, 0) - b.at(0, 0), a.at(0, 1) - b.at(0, 1),
                                              a.at(1, 0) - b.at(1, 0), a.at(1, 1) - b.at(1, 1));
            if (d == 0.0)
                throw std::runtime_error("vanishing codeword-difference determinant: encoder bug");
            best = std::min(best, d);
        }
    }
    return best;
}

// Same minimum computed over the symbol-difference set; equals the pairwise
// result by linearity of the encoder and stays cheap at 16QAM.
inline double min_det_symbol_differences(const Constellation& c,
                                         const GoldenParams& p = golden_params()) {
    std::vector<cplx> diffs;
    for (const auto& a : c.points)
        for (const auto& b : c.points) {
            const cplx d = a - b;
            bool seen = false;
            for (const auto& e : diffs)
                if (e == d) {
                    seen = true;
                    break;
                }
            if (!seen) diffs.push_back(d);
        }
    double best = std::numeric_limits<double>::infinity();
    const std::size_t n = diffs.size();
    for (std::size_t i1 = 0; i1 < n; ++i1)
        for (std::size_t i2 = 0; i2 < n; ++i2)
            for (std::size_t i3 = 0; i3 < n; ++i3)
                for (std::size_t i4 = 0; i4 < n; ++i4) {
                    if (diffs[i1] == cplx{} && diffs[i2] == cplx{} && diffs[i3] == cplx{} &&
                        diffs[i4] == cplx{})
                        continue;
                    const Symbols s{diffs[i1], diffs[i2], diffs[i3], diffs[i4]};
                    const auto cw = encode_golden(s, p);
                    const double d = detail::abs_det2(cw.at(0, 0), cw.at(0, 1), cw.at(1, 0), cw.at(1, 1));
                    if (d == 0.0)
                        throw std::runtime_error(
                            "vanishing codeword-difference determinant: encoder bug");
                    best = std::min(best, d);
                }
    return best;
}

}  // namespace stbcsim
