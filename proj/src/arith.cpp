#include "primediff/arith.hpp"

#include <cmath>
#include <new>
#include <stdexcept>
#include <utility>
#include <algorithm>
#include <string>

#include "primediff/errors.hpp"

namespace primediff::arith {

ArithTables build_tables(std::int64_t n_max, std::int64_t capacity) {
    if (n_max < 1) throw DomainError("build_tables: n_max must be >= 1");
    if (n_max > capacity) {
        throw ResourceError("build_tables: n_max " + std::to_string(n_max) + " exceeds capacity " +
                            std::to_string(capacity));
    }

    ArithTables t;
    t.n_max_ = n_max;
    const auto len = static_cast<std::size_t>(n_max) + 1;
    try {
        t.mangoldt_.assign(len, 0.0);
        t.phi_.assign(len, 0);
        t.mobius_.assign(len, 0);
        t.spf_.assign(len, 0);
    } catch (const std::bad_alloc&) {
        throw ResourceError("build_tables: allocation failed for n_max " + std::to_string(n_max));
    }

    t.phi_[1] = 1;
    t.mobius_[1] = 1;
    for (std::int64_t i = 2; i <= n_max; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        if (t.spf_[ui] == 0) {
            t.spf_[ui] = static_cast<std::int32_t>(i);
            t.phi_[ui] = static_cast<std::int32_t>(i - 1);
            t.mobius_[ui] = -1;
            t.primes_.push_back(static_cast<std::int32_t>(i));
        }
        for (const std::int32_t p : t.primes_) {
            const std::int64_t m = i * p;
            if (p > t.spf_[ui] || m > n_max) break;
            const auto um = static_cast<std::size_t>(m);
            t.spf_[um] = p;
            if (p == t.spf_[ui]) {
                t.phi_[um] = t.phi_[ui] * p;
                t.mobius_[um] = 0;
            } else {
                t.phi_[um] = t.phi_[ui] * (p - 1);
                t.mobius_[um] = static_cast<std::int8_t>(-t.mobius_[ui]);
            }
        }
    }

    // Lambda(n) = log p iff n is a power of p: strip p and see if 1 remains.
    for (const std::int32_t p : t.primes_) {
        const double lp = std::log(static_cast<double>(p));
        for (std::int64_t pk = p; pk <= n_max; pk *= p) {
            t.mangoldt_[static_cast<std::size_t>(pk)] = lp;
            if (pk > n_max / p) break;
        }
    }
    return t;
}

std::int64_t euler_phi(std::int64_t n) {
    if (n < 1) throw DomainError("euler_phi: n must be >= 1");
    std::int64_t result = n;
    for (std::int64_t p = 2; p * p <= n; ++p) {
        if (n % p != 0) continue;
        while (n % p == 0) n /= p;
        result -= result / p;
    }
    if (n > 1) result -= result / n;
    return result;
}

int mobius(std::int64_t n) {
    if (n < 1) throw DomainError("mobius: n must be >= 1");
    int sign = 1;
    for (std::int64_t p = 2; p * p <= n; ++p) {
        if (n % p != 0) continue;
        n /= p;
        if (n % p == 0) return 0;
        sign = -sign;
    }
    if (n > 1) sign = -sign;
    return sign;
}

double ramanujan(std::int64_t q, std::int64_t a) {
    if (q < 1) throw DomainError("ramanujan: q must be >= 1");
    Complex sum{0, 0};
    const std::int64_t ar = mod_floor(a, q);
    for (std::int64_t h = 1; h <= q; ++h) {
        if (std::gcd(h, q) != 1) continue;
        sum += unit_root(mod_floor(h * ar, q), q);
    }
    // The pairing h <-> q-h makes the sum real; what is left is rounding.
    if (std::abs(sum.imag()) > 1e-12 * std::max<double>(1.0, std::sqrt(static_cast<double>(q)))) {
        throw std::logic_error("ramanujan: imaginary residue " + std::to_string(sum.imag()));
    }
    return sum.real();
}

Complex tau(std::int64_t a, std::int64_t d, std::int64_t q) {
    if (q < 1 || d < 1) throw DomainError("tau: q and d must be >= 1");
    Complex sum{0, 0};
    const std::int64_t ar = mod_floor(a, q);
    const std::int64_t dr = mod_floor(d, q);
    for (std::int64_t m = 0; m < q; ++m) {
        if (std::gcd(mod_floor(m * dr + 1, q), q) != 1) continue;
        sum += unit_root(mod_floor(m * ar, q), q);
    }
    return sum;
}

std::int64_t shifted_inverse(std::int64_t d, std::int64_t q) {
    if (q < 1) throw DomainError("shifted_inverse: q must be >= 1");
    if (std::gcd(mod_floor(d, q), q) != 1 && q > 1) {
        throw DomainError("shifted_inverse: d is not a unit mod q");
    }
    if (q == 1) return 0;
    // Extended Euclid for d^{-1} mod q, then m = -d^{-1}.
    std::int64_t old_r = mod_floor(d, q), r = q, old_s = 1, s = 0;
    while (r != 0) {
        const std::int64_t quot = old_r / r;
        old_r = std::exchange(r, old_r - quot * r);
        old_s = std::exchange(s, old_s - quot * s);
    }
    return mod_floor(-old_s, q);
}

Complex tau_closed_form(std::int64_t a, std::int64_t d, std::int64_t q, int sign) {
    if (q < 1 || d < 1) throw DomainError("tau_closed_form: q and d must be >= 1");
    // q = q1 q2 with q2 built from the primes of d: md+1 is a unit mod q2 for
    // every m, so the sum factors as q2 [q2 | a] tau_{a/q2, d, q1}.
    std::int64_t q1 = q, q2 = 1;
    for (std::int64_t g = std::gcd(d, q1); g > 1; g = std::gcd(d, q1)) {
        while (q1 % g == 0) {
            q1 /= g;
            q2 *= g;
        }
    }
    if (mod_floor(a, q2) != 0) return {0, 0};
    const std::int64_t a1 = mod_floor(a, q) / q2;
    const std::int64_t m = shifted_inverse(d, q1);
    const std::int64_t phase = mod_floor(static_cast<std::int64_t>(sign) * m * a1, q1);
    return static_cast<double>(q2) * ramanujan(q1, a1) * unit_root(phase, q1);
}

double psi_upto(std::int64_t x, std::int64_t q, std::int64_t a, const ArithTables& tables) {
    if (q < 1) throw DomainError("psi: q must be >= 1");
    if (x > tables.n_max()) {
        throw DomainError("psi: x = " + std::to_string(x) + " exceeds table bound " +
                          std::to_string(tables.n_max()));
    }
    if (x < 1) return 0.0;
    std::int64_t n = mod_floor(a, q);
    if (n == 0) n = q;
    double sum = 0.0;
    for (; n <= x; n += q) sum += tables.mangoldt(n);
    return sum;
}

double psi(double x, std::int64_t q, std::int64_t a, const ArithTables& tables) {
    if (x > static_cast<double>(tables.n_max())) {
        throw DomainError("psi: x exceeds table bound " + std::to_string(tables.n_max()));
    }
    return psi_upto(static_cast<std::int64_t>(std::floor(x)), q, a, tables);
}

ExceptionalDatum ExceptionalDatum::make(std::int64_t modulus, double beta) {
    if (modulus < 2) throw DomainError("exceptional datum: modulus must be >= 2");
    if (!(beta > 0.5 && beta < 1.0)) throw DomainError("exceptional datum: beta must lie in (1/2, 1)");
    return ExceptionalDatum{modulus, beta, Provenance::synthetic};
}

}  // namespace primediff::arith
