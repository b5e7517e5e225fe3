#pragma once

#include <cstdint>
#include <vector>

#include "primediff/arith.hpp"

namespace primediff::arith {

/// A Dirichlet character stored as a dense table over residues 0..q-1.
struct DirichletCharacter {
    std::int64_t modulus = 1;
    std::vector<Complex> values;
    bool is_principal = true;

    Complex operator()(std::int64_t n) const {
        return values[static_cast<std::size_t>(mod_floor(n, modulus))];
    }
};

inline constexpr std::int64_t kCharacterModulusBound = 10'000;

/// All phi(q) characters mod q, principal first, built from generators of the
/// unit group (one cyclic factor per odd prime power, <-1> x <5> for 2^k).
std::vector<DirichletCharacter> characters_mod(std::int64_t q,
                                               std::int64_t bound = kCharacterModulusBound);

/// psi(x, chi) = sum_{n <= x} chi(n) Lambda(n).
Complex psi_chi(double x, const DirichletCharacter& chi, const ArithTables& tables);

/// |psi(x;q,a) - phi(q)^{-1} sum_chi conj(chi(a)) psi(x,chi)|.
/// For a coprime to q this vanishes up to rounding. For gcd(a, q) > 1 every
/// character is zero at a, so the result is psi(x;q,a) itself.
double verify_inversion(double x, std::int64_t q, std::int64_t a, const ArithTables& tables);

/// verify_inversion for every a in [0, q), sharing one psi(x, chi) per character.
std::vector<double> inversion_discrepancies(double x, std::int64_t q, const ArithTables& tables);

}  // namespace primediff::arith
