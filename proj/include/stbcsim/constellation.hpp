#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "stbcsim/linalg.hpp"

namespace stbcsim {

// Unit-average-energy alphabet with Gray bit labels.
//
// Symbol index i identifies a grid position; labels[i] is the Gray-coded bit
// pattern transmitted for that point (bits_per_symbol bits, MSB first).
struct Constellation {
    unsigned order = 0;                         // m: 2, 4 or 16
    unsigned bits_per_symbol = 0;               // log2(m)
    double scale = 1.0;                         // applied to the integer grid
    std::vector<cplx> points;                   // index -> point
    std::vector<std::uint32_t> labels;          // index -> bit label
    std::vector<std::size_t> index_from_label;  // bit label -> index

    const cplx& point(std::size_t i) const { return points[i]; }
    std::uint32_t label(std::size_t i) const { return labels[i]; }

    double average_energy() const {
        double s = 0.0;
        for (const auto& p : points) s += std::norm(p);
        return s / static_cast<double>(points.size());
    }
};

namespace detail {

// Per-axis reflected Gray codes for the supported level counts.
inline const std::uint32_t* gray_axis(std::size_t levels) {
    static constexpr std::uint32_t g2[] = {0, 1};
    static constexpr std::uint32_t g4[] = {0, 1, 3, 2};
    return levels == 2 ? g2 : g4;
}

}  // namespace detail

inline Constellation build_constellation(unsigned m) {
    Constellation c;
    c.order = m;
    switch (m) {
        case 2:
            c.bits_per_symbol = 1;
            c.scale = 1.0;
            c.points = {cplx{1.0, 0.0}, cplx{-1.0, 0.0}};
            c.labels = {0, 1};
            break;
        case 4:
        case 16: {
            const std::size_t levels = (m == 4) ? 2 : 4;
            c.bits_per_symbol = (m == 4) ? 2 : 4;
            // Levels {..,-3,-1,+1,+3,..} scaled to unit average energy:
            // 4QAM 1/sqrt(2), 16QAM 1/sqrt(10).
            c.scale = (m == 4) ? 1.0 / std::sqrt(2.0) : 1.0 / std::sqrt(10.0);
            const std::uint32_t* gray = detail::gray_axis(levels);
            const unsigned axis_bits = c.bits_per_symbol / 2;
            for (std::size_t a = 0; a < levels; ++a) {
                const double re = (2.0 * static_cast<double>(a) - static_cast<double>(levels - 1)) * c.scale;
                for (std::size_t b = 0; b < levels; ++b) {
                    const double im =
                        (2.0 * static_cast<double>(b) - static_cast<double>(levels - 1)) * c.scale;
                    c.points.emplace_back(re, im);
                    c.labels.push_back((gray[a] << axis_bits) | gray[b]);
                }
            }
            break;
        }
        default:
            throw std::invalid_argument("unsupported constellation order " + std::to_string(m) +
                                        "; supported orders are 2 (bpsk), 4 (4qam), 16 (16qam)");
    }
    c.index_from_label.assign(m, 0);
    for (std::size_t i = 0; i < c.labels.size(); ++i) c.index_from_label[c.labels[i]] = i;
    return c;
}

inline std::vector<std::size_t> bits_to_indices(std::span<const std::uint8_t> bits,
                                                const Constellation& c) {
    const unsigned k = c.bits_per_symbol;
    if (bits.size() % k != 0)
        throw std::invalid_argument("bit count " + std::to_string(bits.size()) +
                                    " not divisible by bits-per-symbol " + std::to_string(k));
    std::vector<std::size_t> idx;
    idx.reserve(bits.size() / k);
    for (std::size_t i = 0; i < bits.size(); i += k) {
        std::uint32_t label = 0;
        for (unsigned j = 0; j < k; ++j) label = (label << 1) | (bits[i + j] ? 1u : 0u);
        idx.push_back(c.index_from_label[label]);
    }
    return idx;
}

inline std::vector<cplx> modulate(std::span<const std::uint8_t> bits, const Constellation& c) {
    std::vector<cplx> out;
    const auto idx = bits_to_indices(bits, c);
    out.reserve(idx.size());
    for (auto i : idx) out.push_back(c.points[i]);
    return out;
}

inline std::vector<std::uint8_t> demap(std::span<const std::size_t> symbol_indices,
                                       const Constellation& c) {
    std::vector<std::uint8_t> bits;
    bits.reserve(symbol_indices.size() * c.bits_per_symbol);
    for (auto i : symbol_indices) {
        if (i >= c.order)
            throw std::invalid_argument("symbol index " + std::to_string(i) +
                                        " out of range for order " + std::to_string(c.order));
        const std::uint32_t label = c.labels[i];
        for (unsigned j = 0; j < c.bits_per_symbol; ++j)
            bits.push_back(static_cast<std::uint8_t>((label >> (c.bits_per_symbol - 1 - j)) & 1u));
    }
    return bits;
}

inline const char* constellation_token(unsigned m) {
    switch (m) {
        case 2:
            return "bpsk";
        case 4:
            return "4qam";
        case 16:
            return "16qam";
        default:
            throw std::invalid_argument("unsupported constellation order " + std::to_string(m));
    }
}

inline unsigned order_from_token(std::string_view token) {
    if (token == "bpsk") return 2;
    if (token == "4qam") return 4;
    if (token == "16qam") return 16;
    throw std::invalid_argument("unknown constellation token '" + std::string(token) +
                                "'; expected bpsk, 4qam or 16qam");
}

}  // namespace stbcsim
