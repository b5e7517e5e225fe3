#include "primediff/farey.hpp"

#include <cmath>
#include <numeric>

namespace primediff::spectral {
namespace {

using i128 = __int128;

std::int64_t floor_div(i128 n, i128 d) {
    i128 q = n / d;
    if ((n % d != 0) && ((n < 0) != (d < 0))) --q;
    return static_cast<std::int64_t>(q);
}

std::int64_t ceil_div(i128 n, i128 d) { return -floor_div(-n, d); }

bool within(double theta, std::int64_t a, std::int64_t q, std::int64_t Q) {
    const double dist = std::abs(torus_offset(theta - static_cast<double>(a) / static_cast<double>(q)));
    return dist <= 1.0 / (static_cast<double>(q) * static_cast<double>(Q));
}

Fraction reduce(std::int64_t a, std::int64_t q) {
    a = mod_floor(a, q);
    const std::int64_t g = std::gcd(a, q);
    return {a / g, q / g};
}

}  // namespace

Fraction dirichlet_approx(double theta, std::int64_t Q) {
    if (Q < 1) throw DomainError("dirichlet_approx: Q must be >= 1");
    const double t = theta - std::floor(theta);

    // Convergents h/k of the continued fraction of t; the last one with
    // k <= Q satisfies |t - h/k| < 1/(k(Q+1)).
    Fraction best{0, 1};
    {
        std::int64_t h2 = 0, h1 = 1, k2 = 1, k1 = 0;
        double x = t;
        for (int iter = 0; iter < 64; ++iter) {
            const double fl = std::floor(x);
            if (fl > 9.0e15) break;
            const auto digit = static_cast<std::int64_t>(fl);
            const i128 hn = static_cast<i128>(digit) * h1 + h2;
            const i128 kn = static_cast<i128>(digit) * k1 + k2;
            if (kn > Q) break;
            h2 = h1, h1 = static_cast<std::int64_t>(hn);
            k2 = k1, k1 = static_cast<std::int64_t>(kn);
            best = reduce(h1, k1);
            const double frac = x - fl;
            if (frac < 1e-15) break;
            x = 1.0 / frac;
        }
    }
    if (within(t, best.a, best.q, Q)) return best;

    // Rounding pushed the convergent off; scan denominators directly.
    for (std::int64_t q = 1; q <= Q; ++q) {
        const auto a = static_cast<std::int64_t>(std::llround(t * static_cast<double>(q)));
        const Fraction f = reduce(a, q);
        if (f.q == q && within(t, f.a, f.q, Q)) return f;
    }
    return best;
}

FareyArc FareyArc::make(std::int64_t a, std::int64_t q, double eta) {
    if (q < 1) throw DomainError("FareyArc: q must be >= 1");
    if (!(eta > 0.0) || eta > 0.5) throw DomainError("FareyArc: eta must lie in (0, 1/2]");
    return {a, q, eta, 0};
}

FareyArc FareyArc::standard(std::int64_t a, std::int64_t q, std::int64_t Q) {
    if (q < 1 || Q < 1) throw DomainError("FareyArc: q and Q must be >= 1");
    const std::int64_t den = q * Q;
    const double eta = std::min(0.5, 1.0 / static_cast<double>(den));
    return {a, q, eta, den >= 2 ? den : 0};
}

bool FareyArc::contains(double theta) const {
    const double dist = std::abs(torus_offset(theta - static_cast<double>(a) / static_cast<double>(q)));
    return dist <= eta;
}

std::pair<std::int64_t, std::int64_t> FareyArc::grid_range(std::int64_t M) const {
    if (eta_den > 0) {
        // M (a/q -+ 1/D) = M (aD -+ q) / (qD), in exact integer arithmetic.
        const i128 den = static_cast<i128>(q) * eta_den;
        const i128 lo = static_cast<i128>(M) * (static_cast<i128>(a) * eta_den - q);
        const i128 hi = static_cast<i128>(M) * (static_cast<i128>(a) * eta_den + q);
        return {ceil_div(lo, den), floor_div(hi, den)};
    }
    const long double centre = static_cast<long double>(M) * a / q;
    const long double half = static_cast<long double>(M) * eta;
    return {static_cast<std::int64_t>(std::ceil(centre - half)),
            static_cast<std::int64_t>(std::floor(centre + half))};
}

ArcFamily::ArcFamily(std::int64_t Q_prime, std::int64_t Q) : Q_prime_(Q_prime), Q_(Q) {
    if (Q < 1 || Q_prime < 1) throw DomainError("ArcFamily: Q and Q' must be >= 1");
    if (Q_prime > Q) throw DomainError("ArcFamily: Q' must not exceed Q");
}

std::vector<FareyArc> ArcFamily::star_arcs(std::int64_t q) const {
    std::vector<FareyArc> arcs;
    for (std::int64_t a = 0; a < q; ++a) {
        if (std::gcd(a, q) == 1) arcs.push_back(FareyArc::standard(a, q, Q_));
    }
    return arcs;
}

std::vector<FareyArc> ArcFamily::all_arcs(std::int64_t q) const {
    std::vector<FareyArc> arcs;
    arcs.reserve(static_cast<std::size_t>(q));
    for (std::int64_t a = 0; a < q; ++a) arcs.push_back(FareyArc::standard(a, q, Q_));
    return arcs;
}

Classification ArcFamily::classify(double theta) const {
    const double t = theta - std::floor(theta);
    for (std::int64_t q = 1; q <= Q_; ++q) {
        const auto a = mod_floor(std::llround(t * static_cast<double>(q)), q);
        if (std::gcd(a, q) != 1 && q > 1) continue;
        if (within(t, a, q, Q_)) return {a, q, q <= Q_prime_ ? ArcClass::major : ArcClass::minor};
    }
    // Unreachable in exact arithmetic; defer to the convergent.
    const Fraction f = dirichlet_approx(t, Q_);
    return {f.a, f.q, f.q <= Q_prime_ ? ArcClass::major : ArcClass::minor};
}

Classification ArcFamily::classify_grid(std::int64_t k, std::int64_t M) const {
    k = mod_floor(k, M);
    for (std::int64_t q = 1; q <= Q_; ++q) {
        // Nearest a: round(kq/M); test |kq - aM| * Q <= M.
        const i128 kq = static_cast<i128>(k) * q;
        const std::int64_t a = floor_div(2 * kq + M, 2 * static_cast<i128>(M));
        const i128 diff = kq - static_cast<i128>(a) * M;
        const i128 adiff = diff < 0 ? -diff : diff;
        if (adiff * Q_ > M) continue;
        const std::int64_t ar = mod_floor(a, q);
        if (q > 1 && std::gcd(ar, q) != 1) continue;
        return {ar, q, q <= Q_prime_ ? ArcClass::major : ArcClass::minor};
    }
    const Fraction f = dirichlet_approx(static_cast<double>(k) / static_cast<double>(M), Q_);
    return {f.a, f.q, f.q <= Q_prime_ ? ArcClass::major : ArcClass::minor};
}

std::vector<bool> grid_mask(std::span<const FareyArc> arcs, std::int64_t M) {
    std::vector<bool> mask(static_cast<std::size_t>(M), false);
    for (const auto& arc : arcs) {
        const auto [lo, hi] = arc.grid_range(M);
        if (hi < lo) continue;
        if (hi - lo + 1 >= M) {
            mask.assign(static_cast<std::size_t>(M), true);
            return mask;
        }
        for (std::int64_t k = lo; k <= hi; ++k) mask[static_cast<std::size_t>(mod_floor(k, M))] = true;
    }
    return mask;
}

}  // namespace primediff::spectral
