#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>

// Small fixed-size dense linear algebra. Everything in this simulator is
// 2x2/2x4 complex or 8x8 real, so a self-contained static matrix type is all
// that is needed.

namespace stbcsim {

using cplx = std::complex<double>;

template <typename T, std::size_t Rows, std::size_t Cols>
struct Mat {
    std::array<T, Rows * Cols> e{};

    static constexpr std::size_t rows() { return Rows; }
    static constexpr std::size_t cols() { return Cols; }

    T& operator()(std::size_t r, std::size_t c) { return e[r * Cols + c]; }
    const T& operator()(std::size_t r, std::size_t c) const { return e[r * Cols + c]; }

    Mat& operator+=(const Mat& o) {
        for (std::size_t i = 0; i < e.size(); ++i) e[i] += o.e[i];
        return *this;
    }
    Mat& operator-=(const Mat& o) {
        for (std::size_t i = 0; i < e.size(); ++i) e[i] -= o.e[i];
        return *this;
    }
    Mat& operator*=(T s) {
        for (auto& v : e) v *= s;
        return *this;
    }

    friend Mat operator+(Mat a, const Mat& b) { return a += b; }
    friend Mat operator-(Mat a, const Mat& b) { return a -= b; }
    friend Mat operator*(T s, Mat a) { return a *= s; }
};

template <typename T, std::size_t R, std::size_t K, std::size_t C>
Mat<T, R, C> matmul(const Mat<T, R, K>& a, const Mat<T, K, C>& b) {
    Mat<T, R, C> out;
    for (std::size_t r = 0; r < R; ++r)
        for (std::size_t c = 0; c < C; ++c) {
            T acc{};
            for (std::size_t k = 0; k < K; ++k) acc += a(r, k) * b(k, c);
            out(r, c) = acc;
        }
    return out;
}

inline double abs_sq(double v) { return v * v; }
inline double abs_sq(const cplx& v) { return std::norm(v); }

template <typename T, std::size_t R, std::size_t C>
double frobenius_norm_sq(const Mat<T, R, C>& m) {
    double s = 0.0;
    for (const auto& v : m.e) s += abs_sq(v);
    return s;
}

template <typename T, std::size_t R, std::size_t C>
double max_abs_diff(const Mat<T, R, C>& a, const Mat<T, R, C>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.e.size(); ++i) d = std::max(d, std::abs(a.e[i] - b.e[i]));
    return d;
}

using Mat22c = Mat<cplx, 2, 2>;

template <std::size_t N>
using Vec = std::array<double, N>;

template <std::size_t N>
Vec<N> matvec(const Mat<double, N, N>& m, const Vec<N>& x) {
    Vec<N> y{};
    for (std::size_t r = 0; r < N; ++r) {
        double acc = 0.0;
        for (std::size_t c = 0; c < N; ++c) acc += m(r, c) * x[c];
        y[r] = acc;
    }
    return y;
}

template <std::size_t N>
struct QrDecomposition {
    Mat<double, N, N> r;   // upper triangular
    Mat<double, N, N> qt;  // transpose of the orthogonal factor

    // max|r_ii| / min|r_ii|; infinity when a diagonal entry vanishes.
    double condition_estimate() const {
        double lo = std::abs(r(0, 0)), hi = lo;
        for (std::size_t i = 1; i < N; ++i) {
            const double d = std::abs(r(i, i));
            lo = std::min(lo, d);
            hi = std::max(hi, d);
        }
        if (lo == 0.0) return std::numeric_limits<double>::infinity();
        return hi / lo;
    }
};

// Householder QR of a square real matrix: a = q * r with q orthogonal.
template <std::size_t N>
QrDecomposition<N> householder_qr(const Mat<double, N, N>& a) {
    QrDecomposition<N> qr;
    qr.r = a;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) qr.qt(i, j) = (i == j) ? 1.0 : 0.0;

    for (std::size_t k = 0; k + 1 < N; ++k) {
        double norm_sq = 0.0;
        for (std::size_t i = k; i < N; ++i) norm_sq += qr.r(i, k) * qr.r(i, k);
        const double norm = std::sqrt(norm_sq);
        if (norm == 0.0) continue;

        Vec<N> v{};
        const double pivot = qr.r(k, k);
        const double alpha = (pivot >= 0.0) ? -norm : norm;
        v[k] = pivot - alpha;
        for (std::size_t i = k + 1; i < N; ++i) v[i] = qr.r(i, k);
        double v_sq = 0.0;
        for (std::size_t i = k; i < N; ++i) v_sq += v[i] * v[i];
        if (v_sq == 0.0) continue;

        // Apply I - 2 v v^T / (v^T v) from the left to r and to qt.
        for (std::size_t c = k; c < N; ++c) {
            double dot = 0.0;
            for (std::size_t i = k; i < N; ++i) dot += v[i] * qr.r(i, c);
            const double f = 2.0 * dot / v_sq;
            for (std::size_t i = k; i < N; ++i) qr.r(i, c) -= f * v[i];
        }
        for (std::size_t c = 0; c < N; ++c) {
            double dot = 0.0;
            for (std::size_t i = k; i < N; ++i) dot += v[i] * qr.qt(i, c);
            const double f = 2.0 * dot / v_sq;
            for (std::size_t i = k; i < N; ++i) qr.qt(i, c) -= f * v[i];
        }
    }
    // Clear round-off below the diagonal.
    for (std::size_t r = 1; r < N; ++r)
        for (std::size_t c = 0; c < r; ++c) qr.r(r, c) = 0.0;
    return qr;
}

}  // namespace stbcsim
