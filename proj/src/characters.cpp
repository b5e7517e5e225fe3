#include "primediff/characters.hpp"

#include <algorithm>
#include <string>

#include "primediff/errors.hpp"

namespace primediff::arith {
namespace {

/// One cyclic factor of (Z/qZ)^*: discrete logs of residues mod `modulus`
/// with respect to a fixed generator of order `order`.
struct CyclicFactor {
    std::int64_t modulus;
    std::int64_t order;
    std::vector<std::int64_t> log;  // -1 off the units
};

std::int64_t pow_mod(std::int64_t b, std::int64_t e, std::int64_t m) {
    std::int64_t r = 1 % m;
    b = mod_floor(b, m);
    while (e > 0) {
        if (e & 1) r = r * b % m;
        b = b * b % m;
        e >>= 1;
    }
    return r;
}

std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n) {
    std::vector<std::pair<std::int64_t, int>> f;
    for (std::int64_t p = 2; p * p <= n; ++p) {
        if (n % p != 0) continue;
        int k = 0;
        while (n % p == 0) n /= p, ++k;
        f.emplace_back(p, k);
    }
    if (n > 1) f.emplace_back(n, 1);
    return f;
}

std::int64_t primitive_root_mod_prime(std::int64_t p) {
    if (p == 2) return 1;
    const auto fs = factorize(p - 1);
    for (std::int64_t g = 2;; ++g) {
        bool ok = true;
        for (auto [r, k] : fs) {
            if (pow_mod(g, (p - 1) / r, p) == 1) {
                ok = false;
                break;
            }
        }
        if (ok) return g;
    }
}

CyclicFactor cyclic_from_generator(std::int64_t modulus, std::int64_t gen, std::int64_t order) {
    CyclicFactor f{modulus, order, std::vector<std::int64_t>(static_cast<std::size_t>(modulus), -1)};
    std::int64_t x = 1 % modulus;
    for (std::int64_t e = 0; e < order; ++e) {
        f.log[static_cast<std::size_t>(x)] = e;
        x = x * gen % modulus;
    }
    return f;
}

std::vector<CyclicFactor> unit_group_factors(std::int64_t q) {
    std::vector<CyclicFactor> out;
    for (auto [p, k] : factorize(q)) {
        std::int64_t pk = 1;
        for (int i = 0; i < k; ++i) pk *= p;
        if (p == 2) {
            if (k == 1) continue;
            if (k == 2) {
                out.push_back(cyclic_from_generator(4, 3, 2));
                continue;
            }
            // (Z/2^k)^* = <-1> x <5>; every unit is (+-1) 5^e uniquely.
            const std::int64_t ord5 = pk / 4;
            CyclicFactor sign{pk, 2, std::vector<std::int64_t>(static_cast<std::size_t>(pk), -1)};
            CyclicFactor five{pk, ord5, std::vector<std::int64_t>(static_cast<std::size_t>(pk), -1)};
            std::int64_t x = 1;
            for (std::int64_t e = 0; e < ord5; ++e) {
                for (int s = 0; s < 2; ++s) {
                    const auto u = static_cast<std::size_t>(s == 0 ? x : pk - x);
                    sign.log[u] = s;
                    five.log[u] = e;
                }
                x = x * 5 % pk;
            }
            out.push_back(std::move(sign));
            out.push_back(std::move(five));
            continue;
        }
        std::int64_t g = primitive_root_mod_prime(p);
        if (k >= 2 && pow_mod(g, p - 1, p * p) == 1) g += p;
        out.push_back(cyclic_from_generator(pk, g, pk / p * (p - 1)));
    }
    return out;
}

}  // namespace

std::vector<DirichletCharacter> characters_mod(std::int64_t q, std::int64_t bound) {
    if (q < 1) throw DomainError("characters_mod: modulus must be >= 1");
    if (q > bound) {
        throw DomainError("characters_mod: modulus " + std::to_string(q) + " exceeds bound " +
                          std::to_string(bound));
    }
    const auto factors = unit_group_factors(q);

    // Exponent of the group; all phases are integers mod `lambda`.
    std::int64_t lambda = 1;
    for (const auto& f : factors) lambda = std::lcm(lambda, f.order);
    std::vector<Complex> roots(static_cast<std::size_t>(lambda));
    for (std::int64_t k = 0; k < lambda; ++k) roots[static_cast<std::size_t>(k)] = unit_root(k, lambda);

    const auto uq = static_cast<std::size_t>(q);
    std::vector<bool> unit(uq);
    for (std::int64_t n = 0; n < q; ++n) unit[static_cast<std::size_t>(n)] = std::gcd(n, q) == 1;

    std::int64_t count = 1;
    for (const auto& f : factors) count *= f.order;

    std::vector<DirichletCharacter> chars;
    chars.reserve(static_cast<std::size_t>(count));
    std::vector<std::int64_t> digits(factors.size(), 0);
    for (std::int64_t idx = 0; idx < count; ++idx) {
        DirichletCharacter chi;
        chi.modulus = q;
        chi.values.assign(uq, Complex{0, 0});
        chi.is_principal = idx == 0;
        for (std::int64_t n = 0; n < q; ++n) {
            if (!unit[static_cast<std::size_t>(n)]) continue;
            std::int64_t phase = 0;
            for (std::size_t i = 0; i < factors.size(); ++i) {
                const auto& f = factors[i];
                const std::int64_t lg = f.log[static_cast<std::size_t>(n % f.modulus)];
                phase += (digits[i] * lg % f.order) * (lambda / f.order);
            }
            chi.values[static_cast<std::size_t>(n)] = roots[static_cast<std::size_t>(phase % lambda)];
        }
        chars.push_back(std::move(chi));
        for (std::size_t i = 0; i < digits.size(); ++i) {
            if (++digits[i] < factors[i].order) break;
            digits[i] = 0;
        }
    }
    return chars;
}

Complex psi_chi(double x, const DirichletCharacter& chi, const ArithTables& tables) {
    if (x > static_cast<double>(tables.n_max())) {
        throw DomainError("psi_chi: x exceeds table bound " + std::to_string(tables.n_max()));
    }
    const auto bound = static_cast<std::int64_t>(std::floor(x));
    Complex sum{0, 0};
    for (std::int64_t n = 2; n <= bound; ++n) {
        const double lam = tables.mangoldt(n);
        if (lam != 0.0) sum += chi(n) * lam;
    }
    return sum;
}

double verify_inversion(double x, std::int64_t q, std::int64_t a, const ArithTables& tables) {
    const double direct = psi(x, q, a, tables);
    if (q == 1) return std::abs(direct - psi(x, 1, 0, tables));
    const auto chars = characters_mod(q);
    Complex acc{0, 0};
    for (const auto& chi : chars) acc += std::conj(chi(a)) * psi_chi(x, chi, tables);
    acc /= static_cast<double>(chars.size());
    return std::abs(direct - acc);
}

std::vector<double> inversion_discrepancies(double x, std::int64_t q, const ArithTables& tables) {
    if (q < 1) throw DomainError("inversion_discrepancies: q must be >= 1");
    const auto chars = characters_mod(q);
    std::vector<Complex> psis;
    psis.reserve(chars.size());
    for (const auto& chi : chars) psis.push_back(psi_chi(x, chi, tables));
    std::vector<double> out(static_cast<std::size_t>(q));
    for (std::int64_t a = 0; a < q; ++a) {
        Complex acc{0, 0};
        for (std::size_t i = 0; i < chars.size(); ++i) acc += std::conj(chars[i](a)) * psis[i];
        acc /= static_cast<double>(chars.size());
        out[static_cast<std::size_t>(a)] = std::abs(psi(x, q, a, tables) - acc);
    }
    return out;
}

}  // namespace primediff::arith
