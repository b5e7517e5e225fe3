#pragma once

// Farey arcs M_{a,q,eta} = { theta : |theta - a/q| <= eta } and the families
// M*_q (reduced a) and M_q (all a) with eta = 1/(qQ).

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "primediff/spectral.hpp"

namespace primediff::spectral {

struct Fraction {
    std::int64_t a = 0;
    std::int64_t q = 1;
    friend bool operator==(const Fraction&, const Fraction&) = default;
};

/// Rational a/q with 1 <= q <= Q, gcd(a,q) = 1, a in [0,q), and
/// |theta - a/q| <= 1/(qQ) on the torus. Built from continued-fraction
/// convergents; falls back to a Farey scan if rounding breaks the bound.
Fraction dirichlet_approx(double theta, std::int64_t Q);

struct FareyArc {
    std::int64_t a = 0;
    std::int64_t q = 1;
    double eta = 0.5;
    /// When nonzero, eta is exactly 1/eta_den and grid ranges use integers.
    std::int64_t eta_den = 0;

    static FareyArc make(std::int64_t a, std::int64_t q, double eta);
    /// Arc of half-width 1/(qQ).
    static FareyArc standard(std::int64_t a, std::int64_t q, std::int64_t Q);

    double width() const { return 2 * eta; }
    bool contains(double theta) const;

    /// Grid indices k with k/M in the arc: [ceil(M(a/q - eta)), floor(M(a/q + eta))],
    /// not yet reduced mod M.
    std::pair<std::int64_t, std::int64_t> grid_range(std::int64_t M) const;
};

enum class ArcClass { major, minor };

struct Classification {
    std::int64_t a = 0;
    std::int64_t q = 1;
    ArcClass arc_class = ArcClass::major;
};

/// Arcs M*_q with eta = 1/(qQ) for q <= Q; q <= Q_prime are major, the rest
/// minor. Arcs are produced on demand since their count grows like Q^2.
class ArcFamily {
public:
    ArcFamily(std::int64_t Q_prime, std::int64_t Q);

    std::int64_t Q_prime() const { return Q_prime_; }
    std::int64_t Q() const { return Q_; }

    /// M*_q: reduced a in [0,q) (a = 0 only for q = 1).
    std::vector<FareyArc> star_arcs(std::int64_t q) const;
    /// M_q: every a in [0,q).
    std::vector<FareyArc> all_arcs(std::int64_t q) const;

    /// Smallest q <= Q whose M*_q contains theta. Dirichlet's theorem makes
    /// this total.
    Classification classify(double theta) const;
    /// Exact classification of the grid point k/M.
    Classification classify_grid(std::int64_t k, std::int64_t M) const;

private:
    std::int64_t Q_prime_;
    std::int64_t Q_;
};

/// Marks the grid points of k/M, k in [0,M), lying in the union of `arcs`.
std::vector<bool> grid_mask(std::span<const FareyArc> arcs, std::int64_t M);

/// Riemann sum (1/M) sum |grid[k]|^2 over grid points in the union of arcs.
template <typename Scalar>
Scalar arc_energy(const SpectrumGrid<Scalar>& grid, std::span<const FareyArc> arcs) {
    const auto mask = grid_mask(arcs, grid.M);
    Scalar sum = 0;
    for (std::int64_t k = 0; k < grid.M; ++k) {
        if (mask[static_cast<std::size_t>(k)]) sum += std::norm(grid.values[static_cast<Eigen::Index>(k)]);
    }
    return sum / static_cast<Scalar>(grid.M);
}

/// Energy of f over the arcs. Requires M >= 8 * support length.
template <typename Scalar>
Scalar arc_energy(const IntegerSignal<Scalar>& f, std::span<const FareyArc> arcs, std::int64_t M) {
    if (M < 8 * f.size()) {
        throw DomainError("arc_energy: grid " + std::to_string(M) + " is below 8 x support " +
                          std::to_string(f.size()));
    }
    return arc_energy(grid_spectrum(f, M), arcs);
}

}  // namespace primediff::spectral
