#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <numeric>

namespace primediff {

using Complex = std::complex<double>;

inline std::int64_t mod_floor(std::int64_t x, std::int64_t m) {
    const std::int64_t r = x % m;
    return r < 0 ? r + m : r;
}

/// e(k/q) = exp(2 pi i k/q), evaluated from the reduced residue so that large
/// k never loses precision. Quarter turns are returned exactly.
template <typename Scalar = double>
std::complex<Scalar> unit_root(std::int64_t k, std::int64_t q) {
    const std::int64_t r = mod_floor(k, q);
    if (r == 0) return {1, 0};
    if (2 * r == q) return {-1, 0};
    if (4 * r == q) return {0, 1};
    if (4 * r == 3 * q) return {0, -1};
    const Scalar angle = 2 * std::numbers::pi_v<Scalar> * static_cast<Scalar>(r) / static_cast<Scalar>(q);
    return {std::cos(angle), std::sin(angle)};
}

/// e(theta) for real theta.
template <typename Scalar = double>
std::complex<Scalar> expi_turns(Scalar theta) {
    const Scalar frac = theta - std::floor(theta);
    const Scalar angle = 2 * std::numbers::pi_v<Scalar> * frac;
    return {std::cos(angle), std::sin(angle)};
}

/// Signed distance from theta to the nearest integer, in [-1/2, 1/2).
inline double torus_offset(double theta) {
    return theta - std::floor(theta + 0.5);
}

}  // namespace primediff
