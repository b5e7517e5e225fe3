#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "primediff/numeric.hpp"

namespace primediff::arith {

/// Sieved arithmetic functions on 1..n_max. Index 0 is unused padding so that
/// `mangoldt()[n]` reads naturally.
class ArithTables {
public:
    /// Largest n_max accepted by `build_tables` (four arrays of this length).
    static constexpr std::int64_t kDefaultCapacity = 100'000'000;

    std::int64_t n_max() const noexcept { return n_max_; }

    double mangoldt(std::int64_t n) const { return mangoldt_[static_cast<std::size_t>(n)]; }
    std::int64_t phi(std::int64_t n) const { return phi_[static_cast<std::size_t>(n)]; }
    int mobius(std::int64_t n) const { return mobius_[static_cast<std::size_t>(n)]; }
    std::int64_t spf(std::int64_t n) const { return spf_[static_cast<std::size_t>(n)]; }
    bool is_prime(std::int64_t n) const { return n >= 2 && spf(n) == n; }

    std::span<const double> mangoldt_table() const noexcept { return mangoldt_; }
    std::span<const std::int32_t> primes() const noexcept { return primes_; }

private:
    friend ArithTables build_tables(std::int64_t n_max, std::int64_t capacity);

    std::int64_t n_max_ = 0;
    std::vector<double> mangoldt_;
    std::vector<std::int32_t> phi_;
    std::vector<std::int8_t> mobius_;
    std::vector<std::int32_t> spf_;
    std::vector<std::int32_t> primes_;
};

/// Linear sieve producing Lambda, phi, mu and the smallest prime factor.
/// Throws DomainError for n_max < 1 and ResourceError above `capacity`.
ArithTables build_tables(std::int64_t n_max, std::int64_t capacity = ArithTables::kDefaultCapacity);

/// phi(n) by trial division, for moduli beyond any table.
std::int64_t euler_phi(std::int64_t n);
int mobius(std::int64_t n);

/// Ramanujan sum c_q(a) = sum over units h mod q of e(ha/q).
double ramanujan(std::int64_t q, std::int64_t a);

/// tau_{a,d,q}: sum of e(ma/q) over 0 <= m < q with gcd(md+1, q) = 1.
Complex tau(std::int64_t a, std::int64_t d, std::int64_t q);

/// Closed form c_q(a) e(sign * m_{d,q} a/q), where m_{d,q} d + 1 = 0 (mod q).
/// For gcd(d,q) > 1, write q = q1 q2 with q2 the part of q over primes of d:
/// the value is q2 [q2 | a] times the closed form at (a/q2, d, q1), which is
/// zero whenever gcd(a,q) = 1. Only sign = +1 agrees with `tau`.
Complex tau_closed_form(std::int64_t a, std::int64_t d, std::int64_t q, int sign = +1);

/// The solution m in [0,q) of m d + 1 = 0 (mod q); requires gcd(d,q) = 1.
std::int64_t shifted_inverse(std::int64_t d, std::int64_t q);

/// psi(x;q,a): sum of Lambda(n) over 1 <= n <= x with n = a (mod q).
double psi(double x, std::int64_t q, std::int64_t a, const ArithTables& tables);

/// Same as psi(x;q,a) over a caller-chosen integer bound.
double psi_upto(std::int64_t x, std::int64_t q, std::int64_t a, const ArithTables& tables);

/// Synthetic stand-in for an exceptional zero: a modulus and a real beta.
struct ExceptionalDatum {
    enum class Provenance { synthetic };

    std::int64_t modulus = 2;
    double beta = 0.75;
    Provenance provenance = Provenance::synthetic;

    /// Validates d_D >= 2 and beta in (1/2, 1); throws DomainError otherwise.
    static ExceptionalDatum make(std::int64_t modulus, double beta);
};

}  // namespace primediff::arith
