#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "stbcsim/channel.hpp"
#include "stbcsim/constellation.hpp"
#include "stbcsim/linalg.hpp"
#include "stbcsim/stbc.hpp"

// Maximum-likelihood detection: an exhaustive scan over all m^4 candidate
// codewords, and an exact sphere decoder over the equivalent 8-dimensional
// real lattice. Both return the argmin of ||Y - C(s) H||_F^2; ties go to the
// lowest lexicographic index tuple.

namespace stbcsim {

enum class DecodeAlgorithm { ml, sphere };

inline const char* algorithm_token(DecodeAlgorithm a) {
    return a == DecodeAlgorithm::ml ? "ml" : "sphere";
}

inline DecodeAlgorithm algorithm_from_token(std::string_view token) {
    if (token == "ml") return DecodeAlgorithm::ml;
    if (token == "sphere") return DecodeAlgorithm::sphere;
    throw std::invalid_argument("unknown decoder token '" + std::string(token) +
                                "'; expected ml or sphere");
}

struct DecodeResult {
    std::array<std::size_t, 4> indices{};
    double metric = 0.0;                 // achieved ||Y - C H||_F^2
    std::uint64_t candidates_visited = 0;  // ml: candidate codewords scanned
    std::uint64_t nodes_visited = 0;        // sphere: tree nodes expanded
    double first_leaf_metric = std::numeric_limits<double>::quiet_NaN();  // sphere: Babai leaf
    bool used_fallback = false;          // decode(): degenerate lattice, fell back to ml
};

// Real-valued form of the detection problem: with x = realvec(s) in the
// column order (Re s1, Im s1, ..., Re s4, Im s4) and realvec interleaving
// real/imaginary parts of the received matrix row-major,
// realvec(C(s) H) = g x for every s.
struct LatticeProblem {
    Mat<double, 8, 8> g;
    Vec<8> y{};
    std::vector<double> re_coords;  // sorted distinct real parts of the alphabet
    std::vector<double> im_coords;  // sorted distinct imaginary parts
    std::vector<std::size_t> symbol_index_by_coord;  // re_idx * nim + im_idx -> index
    QrDecomposition<8> qr;
    double condition_estimate = 0.0;
    bool degenerate = false;

    const std::vector<double>& grid(std::size_t dim) const {
        return (dim % 2 == 0) ? re_coords : im_coords;
    }
};

inline Vec<8> realvec(const Mat22c& m) {
    Vec<8> v{};
    for (std::size_t t = 0; t < 2; ++t)
        for (std::size_t r = 0; r < 2; ++r) {
            v[2 * (2 * t + r)] = m(t, r).real();
            v[2 * (2 * t + r) + 1] = m(t, r).imag();
        }
    return v;
}

namespace detail {

inline std::vector<double> sorted_unique(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

inline std::size_t exact_position(const std::vector<double>& coords, double v) {
    const auto it = std::lower_bound(coords.begin(), coords.end(), v);
    return static_cast<std::size_t>(it - coords.begin());
}

}  // namespace detail

inline LatticeProblem build_lattice(const Mat22c& received, const ChannelRealization& ch,
                                    const Constellation& c,
                                    const GoldenParams& p = golden_params()) {
    LatticeProblem prob;
    const auto a = dispersion_matrices(ch.scheme, p);
    for (std::size_t k = 0; k < 4; ++k) {
        const Mat22c mk = apply_channel(a[k], ch);
        for (std::size_t t = 0; t < 2; ++t)
            for (std::size_t r = 0; r < 2; ++r) {
                const std::size_t row = 2 * (2 * t + r);
                prob.g(row, 2 * k) = mk(t, r).real();
                prob.g(row + 1, 2 * k) = mk(t, r).imag();
                // Column for Im s_k carries j * mk.
                prob.g(row, 2 * k + 1) = -mk(t, r).imag();
                prob.g(row + 1, 2 * k + 1) = mk(t, r).real();
            }
    }
    prob.y = realvec(received);

    std::vector<double> res, ims;
    res.reserve(c.order);
    ims.reserve(c.order);
    for (const auto& pt : c.points) {
        res.push_back(pt.real());
        ims.push_back(pt.imag());
    }
    prob.re_coords = detail::sorted_unique(std::move(res));
    prob.im_coords = detail::sorted_unique(std::move(ims));
    const std::size_t nre = prob.re_coords.size();
    const std::size_t nim = prob.im_coords.size();
    if (nre * nim != c.order)
        throw std::invalid_argument("constellation is not a product of its I/Q coordinate sets");
    prob.symbol_index_by_coord.assign(nre * nim, c.order);
    for (std::size_t i = 0; i < c.points.size(); ++i) {
        const std::size_t ri = detail::exact_position(prob.re_coords, c.points[i].real());
        const std::size_t qi = detail::exact_position(prob.im_coords, c.points[i].imag());
        prob.symbol_index_by_coord[ri * nim + qi] = i;
    }

    prob.qr = householder_qr(prob.g);
    prob.condition_estimate = prob.qr.condition_estimate();
    prob.degenerate = !(prob.condition_estimate <= 1e12);
    return prob;
}

inline DecodeResult ml_decode(const Mat22c& received, const ChannelRealization& ch,
                              const Constellation& c, const GoldenParams& p = golden_params()) {
    const std::size_t m = c.order;
    const auto a = dispersion_matrices(ch.scheme, p);
    std::array<Mat22c, 4> mk;
    for (std::size_t k = 0; k < 4; ++k) mk[k] = apply_channel(a[k], ch);

    // Received-side partial sums over (s1, s2) and (s3, s4) pairs.
    std::vector<Mat22c> p12(m * m), p34(m * m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            p12[i * m + j] = c.points[i] * mk[0] + c.points[j] * mk[1];
            p34[i * m + j] = c.points[i] * mk[2] + c.points[j] * mk[3];
        }

    double best = std::numeric_limits<double>::infinity();
    std::size_t best12 = 0, best34 = 0;
    for (std::size_t i12 = 0; i12 < m * m; ++i12) {
        const Mat22c& u = p12[i12];
        for (std::size_t i34 = 0; i34 < m * m; ++i34) {
            const Mat22c& v = p34[i34];
            double metric = 0.0;
            for (std::size_t e = 0; e < 4; ++e) metric += std::norm(received.e[e] - u.e[e] - v.e[e]);
            if (metric < best) {
                best = metric;
                best12 = i12;
                best34 = i34;
            }
        }
    }

    DecodeResult r;
    r.indices = {best12 / m, best12 % m, best34 / m, best34 % m};
    r.metric = best;
    r.candidates_visited = static_cast<std::uint64_t>(m) * m * m * m;
    return r;
}

// Depth-first Schnorr-Euchner enumeration over the finite grid. Starts with
// an infinite radius (first leaf is the Babai point) and shrinks it on every
// improving leaf; exact ML over the grid.
inline DecodeResult sphere_decode(const LatticeProblem& prob, const Constellation& c) {
    if (prob.degenerate)
        throw std::runtime_error(
            "lattice matrix is numerically rank-deficient; use the exhaustive ml decoder");

    const auto& r = prob.qr.r;
    const Vec<8> z = matvec(prob.qr.qt, prob.y);

    std::array<std::array<std::uint8_t, 4>, 8> order{};
    std::array<std::size_t, 8> count{}, pos{};
    std::array<double, 8> accum{}, pd_above{};
    std::array<double, 8> chosen_value{};
    std::array<std::uint8_t, 8> chosen_idx{}, best_idx{};

    const auto enter_level = [&](std::size_t lvl) {
        const auto& grid = prob.grid(lvl);
        double acc = 0.0;
        for (std::size_t j = lvl + 1; j < 8; ++j) acc += r(lvl, j) * chosen_value[j];
        accum[lvl] = acc;
        const double center = (z[lvl] - acc) / r(lvl, lvl);
        const std::size_t n = grid.size();
        count[lvl] = n;
        pos[lvl] = 0;
        auto& ord = order[lvl];
        for (std::size_t i = 0; i < n; ++i) ord[i] = static_cast<std::uint8_t>(i);
        std::sort(ord.begin(), ord.begin() + n, [&](std::uint8_t a, std::uint8_t b) {
            const double da = std::abs(grid[a] - center);
            const double db = std::abs(grid[b] - center);
            return da != db ? da < db : a < b;
        });
    };

    DecodeResult result;
    double best = std::numeric_limits<double>::infinity();

    std::size_t lvl = 7;
    pd_above[7] = 0.0;
    enter_level(7);
    while (true) {
        if (pos[lvl] == count[lvl]) {
            if (lvl == 7) break;
            ++lvl;
            continue;
        }
        const std::uint8_t gi = order[lvl][pos[lvl]++];
        const double v = prob.grid(lvl)[gi];
        const double t = z[lvl] - accum[lvl] - r(lvl, lvl) * v;
        const double dist = pd_above[lvl] + t * t;
        ++result.nodes_visited;
        if (dist >= best) {
            // Candidates are sorted by distance from the center, so every
            // remaining sibling is at least as far.
            pos[lvl] = count[lvl];
            continue;
        }
        if (lvl == 0) {
            if (std::isnan(result.first_leaf_metric)) result.first_leaf_metric = dist;
            best = dist;
            best_idx = chosen_idx;
            best_idx[0] = gi;
        } else {
            chosen_value[lvl] = v;
            chosen_idx[lvl] = gi;
            pd_above[lvl - 1] = dist;
            --lvl;
            enter_level(lvl);
        }
    }

    const std::size_t nim = prob.im_coords.size();
    for (std::size_t k = 0; k < 4; ++k) {
        const std::size_t ri = best_idx[2 * k];
        const std::size_t qi = best_idx[2 * k + 1];
        result.indices[k] = prob.symbol_index_by_coord[ri * nim + qi];
    }
    result.metric = best;
    return result;
}

// Dispatch; a sphere request on a degenerate lattice transparently falls back
// to the exhaustive scan and flags the result.
inline DecodeResult decode(const Mat22c& received, const ChannelRealization& ch,
                           const Constellation& c, DecodeAlgorithm algorithm,
                           const GoldenParams& p = golden_params()) {
    if (algorithm == DecodeAlgorithm::ml) return ml_decode(received, ch, c, p);
    const LatticeProblem prob = build_lattice(received, ch, c, p);
    if (prob.degenerate) {
        DecodeResult r = ml_decode(received, ch, c, p);
        r.used_fallback = true;
        return r;
    }
    return sphere_decode(prob, c);
}

}  // namespace stbcsim
