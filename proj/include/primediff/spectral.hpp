#pragma once

// Finite-support signals on Z and their Fourier transforms on the torus.
//
// Convention used everywhere in this library:
//     f^(theta) = sum_x f(x) e(-x theta),   e(t) = exp(2 pi i t).
// Grids sample f^ at theta = k/M, k = 0..M-1.

#include <Eigen/Core>
#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "primediff/errors.hpp"
#include "primediff/numeric.hpp"

namespace primediff::spectral {

template <typename Scalar>
using ComplexVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;

/// f : Z -> C supported on [offset, offset + values.size()).
template <typename Scalar>
struct IntegerSignal {
    std::int64_t offset = 0;
    ComplexVector<Scalar> values;

    std::int64_t size() const { return static_cast<std::int64_t>(values.size()); }
    bool empty() const { return values.size() == 0; }
    std::int64_t first() const { return offset; }
    std::int64_t last() const { return offset + size() - 1; }

    std::complex<Scalar> at(std::int64_t x) const {
        const std::int64_t i = x - offset;
        return (i < 0 || i >= size()) ? std::complex<Scalar>{} : values[static_cast<Eigen::Index>(i)];
    }

    /// Drops exact leading and trailing zeros; an all-zero signal becomes empty.
    IntegerSignal& normalize() {
        Eigen::Index lo = 0, hi = values.size();
        while (lo < hi && values[lo] == std::complex<Scalar>{}) ++lo;
        while (hi > lo && values[hi - 1] == std::complex<Scalar>{}) --hi;
        ComplexVector<Scalar> trimmed = values.segment(lo, hi - lo);
        values.swap(trimmed);
        offset = hi > lo ? offset + lo : 0;
        return *this;
    }

    Scalar l2_squared() const { return values.squaredNorm(); }

    static IntegerSignal zeros(std::int64_t offset, std::int64_t length) {
        return {offset, ComplexVector<Scalar>::Zero(static_cast<Eigen::Index>(length))};
    }

    /// 1_{[first, first + length)}.
    static IntegerSignal interval(std::int64_t first, std::int64_t length) {
        return {first, ComplexVector<Scalar>::Ones(static_cast<Eigen::Index>(length))};
    }

    static IntegerSignal delta(std::int64_t x0) { return interval(x0, 1); }

    /// Indicator of a sorted set of integers.
    static IntegerSignal indicator(std::span<const std::int64_t> sorted_support) {
        if (sorted_support.empty()) return {};
        const std::int64_t lo = sorted_support.front();
        auto f = zeros(lo, sorted_support.back() - lo + 1);
        for (const std::int64_t x : sorted_support) f.values[static_cast<Eigen::Index>(x - lo)] = 1;
        return f;
    }
};

using Signal = IntegerSignal<double>;

/// A point of the torus, either a reduced rational a/q shifted by kappa, or a
/// plain real. The offset is kept apart from a/q so points close to a
/// rational keep full precision.
struct TorusPoint {
    std::optional<std::int64_t> a;  // set together with q
    std::int64_t q = 1;
    double kappa = 0.0;
    double theta = 0.0;  // used when `a` is empty

    static TorusPoint rational(std::int64_t a, std::int64_t q, double kappa = 0.0) {
        if (q < 1) throw DomainError("TorusPoint: q must be >= 1");
        if (std::abs(kappa) > 0.5) throw DomainError("TorusPoint: |kappa| must be <= 1/2");
        const std::int64_t g = std::gcd(mod_floor(a, q), q);
        return {mod_floor(a, q) / g, q / g, kappa, 0.0};
    }

    static TorusPoint real(double theta) { return {std::nullopt, 1, 0.0, theta - std::floor(theta)}; }

    bool is_rational() const { return a.has_value(); }

    /// Representative in [0, 1).
    double value() const {
        if (!a) return theta;
        const double v = static_cast<double>(*a) / static_cast<double>(q) + kappa;
        return v - std::floor(v);
    }
};

/// f^(t) by direct summation. Rational phases are reduced exactly.
template <typename Scalar>
std::complex<Scalar> transform_at(const IntegerSignal<Scalar>& f, const TorusPoint& t) {
    std::complex<Scalar> sum{};
    for (Eigen::Index i = 0; i < f.values.size(); ++i) {
        const auto& v = f.values[i];
        if (v == std::complex<Scalar>{}) continue;
        const std::int64_t x = f.offset + static_cast<std::int64_t>(i);
        std::complex<Scalar> phase;
        if (t.a) {
            phase = unit_root<Scalar>(-mod_floor(x, t.q) * *t.a, t.q);
            if (t.kappa != 0.0) phase *= expi_turns<Scalar>(-static_cast<Scalar>(x) * static_cast<Scalar>(t.kappa));
        } else {
            phase = expi_turns<Scalar>(-static_cast<Scalar>(x) * static_cast<Scalar>(t.theta));
        }
        sum += v * phase;
    }
    return sum;
}

template <typename Scalar>
std::complex<Scalar> transform_at(const IntegerSignal<Scalar>& f, double theta) {
    return transform_at(f, TorusPoint::real(theta));
}

/// Samples of f^ on the grid k/M.
template <typename Scalar>
struct SpectrumGrid {
    std::int64_t M = 0;
    ComplexVector<Scalar> values;

    std::complex<Scalar> operator[](std::int64_t k) const {
        return values[static_cast<Eigen::Index>(mod_floor(k, M))];
    }

    /// (1/M) sum_k |f^(k/M)|^2.
    Scalar mean_square() const { return values.squaredNorm() / static_cast<Scalar>(M); }
};

/// FFT evaluation of f^ at k/M. Requires M >= support length.
template <typename Scalar>
SpectrumGrid<Scalar> grid_spectrum(const IntegerSignal<Scalar>& f, std::int64_t M) {
    if (M < 1 || M < f.size()) {
        throw DomainError("grid_spectrum: grid size " + std::to_string(M) + " is below support length " +
                          std::to_string(f.size()));
    }
    SpectrumGrid<Scalar> g{M, ComplexVector<Scalar>::Zero(static_cast<Eigen::Index>(M))};
    if (f.empty()) return g;
    ComplexVector<Scalar> padded = ComplexVector<Scalar>::Zero(static_cast<Eigen::Index>(M));
    padded.head(f.values.size()) = f.values;
    Eigen::FFT<Scalar> fft;
    fft.fwd(g.values, padded);
    // Shift theorem: the FFT indexes the support from 0, the signal from offset.
    const std::int64_t off = mod_floor(f.offset, M);
    if (off != 0) {
        for (std::int64_t k = 0; k < M; ++k) {
            g.values[static_cast<Eigen::Index>(k)] *= unit_root<Scalar>(-mod_floor(off * k, M), M);
        }
    }
    return g;
}

/// (f * g)(x) = sum_y f(y) g(x - y), by direct summation.
template <typename Scalar>
IntegerSignal<Scalar> convolve(const IntegerSignal<Scalar>& f, const IntegerSignal<Scalar>& g) {
    if (f.empty() || g.empty()) return {};
    auto out = IntegerSignal<Scalar>::zeros(f.offset + g.offset, f.size() + g.size() - 1);
    for (Eigen::Index i = 0; i < f.values.size(); ++i) {
        if (f.values[i] == std::complex<Scalar>{}) continue;
        out.values.segment(i, g.values.size()) += f.values[i] * g.values;
    }
    return out;
}

/// x -> f(-x).
template <typename Scalar>
IntegerSignal<Scalar> reflect(const IntegerSignal<Scalar>& f) {
    if (f.empty()) return {};
    return {-f.last(), f.values.reverse()};
}

/// sum_x f(x) conj(g(x)).
template <typename Scalar>
std::complex<Scalar> inner_product(const IntegerSignal<Scalar>& f, const IntegerSignal<Scalar>& g) {
    const std::int64_t lo = std::max(f.first(), g.first());
    const std::int64_t hi = std::min(f.last(), g.last());
    if (f.empty() || g.empty() || lo > hi) return {};
    const auto n = static_cast<Eigen::Index>(hi - lo + 1);
    return g.values.segment(static_cast<Eigen::Index>(lo - g.offset), n)
        .dot(f.values.segment(static_cast<Eigen::Index>(lo - f.offset), n));
}

/// Default quadrature grid: the next power of two at or above 8 * length.
inline std::int64_t default_grid_size(std::int64_t support_length, std::int64_t factor = 8) {
    std::int64_t m = 1;
    while (m < factor * std::max<std::int64_t>(support_length, 1)) m <<= 1;
    return m;
}

}  // namespace primediff::spectral
