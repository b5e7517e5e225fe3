#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "primediff/errors.hpp"
#include "primediff/farey.hpp"

using namespace primediff;
using namespace primediff::spectral;

namespace {
double torus_dist(double t, double x) {
    double d = std::fmod(std::abs(t - x), 1.0);
    return std::min(d, 1.0 - d);
}
}  // namespace

TEST_CASE("dirichlet_approx: examples") {
    auto f = dirichlet_approx(1.0 / 7.0, 10);
    CHECK(f.a == 1);
    CHECK(f.q == 7);
    f = dirichlet_approx(0.31, 10);
    CHECK(f.a == 1);
    CHECK(f.q == 3);
    CHECK(std::abs(0.31 - 1.0 / 3.0) <= 1.0 / 30.0);
    f = dirichlet_approx(0.0, 5);
    CHECK(f.a == 0);
    CHECK(f.q == 1);
    f = dirichlet_approx(1.0 - 1e-13, 50);
    CHECK(f.q == 1);
    CHECK_THROWS_AS(dirichlet_approx(0.5, 0), DomainError);
}

TEST_CASE("dirichlet_approx: fuzzed inequality and agreement with a Farey scan") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-3, 3);
    std::uniform_int_distribution<std::int64_t> Qd(1, 1000);
    for (int i = 0; i < 10000; ++i) {
        const double th = u(rng);
        const auto Q = Qd(rng);
        const auto f = dirichlet_approx(th, Q);
        CHECK(f.q >= 1);
        CHECK(f.q <= Q);
        CHECK(std::gcd(f.a, f.q) == 1);
        CHECK(torus_dist(th, static_cast<double>(f.a) / static_cast<double>(f.q)) <=
              1.0 / static_cast<double>(f.q * Q) * (1 + 1e-9));
    }
    // exhaustive scan oracle on small Q: some q <= Q always works
    for (int i = 0; i < 500; ++i) {
        const double th = std::abs(u(rng));
        const std::int64_t Q = 1 + i % 40;
        bool exists = false;
        for (std::int64_t q = 1; q <= Q && !exists; ++q)
            for (std::int64_t a = 0; a <= q; ++a)
                if (torus_dist(th, double(a) / double(q)) <= 1.0 / double(q * Q)) exists = true;
        CHECK(exists);
    }
}

TEST_CASE("FareyArc") {
    const auto arc = FareyArc::standard(1, 3, 10);
    CHECK(arc.width() == doctest::Approx(2.0 / 30.0));
    CHECK(arc.contains(1.0 / 3.0 + 0.03));
    CHECK_FALSE(arc.contains(1.0 / 3.0 + 0.04));
    CHECK(FareyArc::standard(0, 1, 10).contains(0.97));
    const auto [lo, hi] = arc.grid_range(300);
    CHECK(lo == 90);
    CHECK(hi == 110);
    const auto [l0, h0] = FareyArc::standard(0, 1, 4).grid_range(16);
    CHECK(l0 == -4);
    CHECK(h0 == 4);
    CHECK_THROWS_AS(FareyArc::make(0, 1, 0.0), DomainError);
    CHECK_THROWS_AS(FareyArc::make(0, 1, 0.6), DomainError);
    CHECK_THROWS_AS(FareyArc::make(0, 0, 0.1), DomainError);
    // widths shrink in q
    for (std::int64_t q = 2; q < 20; ++q)
        CHECK(FareyArc::standard(1, q, 50).width() < FareyArc::standard(1, q - 1, 50).width());
}

TEST_CASE("ArcFamily: arcs and classification") {
    const ArcFamily fam(4, 20);
    CHECK(fam.star_arcs(1).size() == 1);
    CHECK(fam.star_arcs(6).size() == 2);
    CHECK(fam.all_arcs(6).size() == 6);
    const auto half = fam.classify(0.5);
    CHECK(half.a == 1);
    CHECK(half.q == 2);
    CHECK(half.arc_class == ArcClass::major);
    const auto c = fam.classify(3.0 / 17.0);
    CHECK(c.q == 17);
    CHECK(c.arc_class == ArcClass::minor);
    CHECK_THROWS_AS(ArcFamily(5, 4), DomainError);
    CHECK_THROWS_AS(ArcFamily(0, 4), DomainError);
}

TEST_CASE("ArcFamily: total coverage on a 1e5 grid, consistent with exact grid classification") {
    const ArcFamily fam(10, 300);
    const std::int64_t M = 100000;
    std::int64_t major = 0;
    for (std::int64_t k = 0; k < M; ++k) {
        const auto g = fam.classify_grid(k, M);
        REQUIRE(g.q >= 1);
        REQUIRE(g.q <= 300);
        const double th = static_cast<double>(k) / static_cast<double>(M);
        CHECK(torus_dist(th, double(g.a) / double(g.q)) <= 1.0 / double(g.q * 300) + 1e-12);
        // no smaller denominator captures k/M
        if (k % 97 == 0) {
            const auto r = fam.classify(th);
            CHECK(r.q == g.q);
            CHECK(r.a == g.a);
        }
        major += g.arc_class == ArcClass::major;
    }
    CHECK(major > 0);
    CHECK(major < M);
}

TEST_CASE("grid_mask and arc_energy") {
    const std::int64_t M = 64;
    std::vector<FareyArc> whole{FareyArc::make(0, 1, 0.5)};
    const auto mask = grid_mask(whole, M);
    CHECK(std::count(mask.begin(), mask.end(), true) == M);

    std::mt19937_64 rng(4);
    std::normal_distribution<double> n01;
    Signal f = Signal::zeros(1, 8);
    for (int i = 0; i < 8; ++i) f.values[i] = n01(rng);
    CHECK(arc_energy<double>(f, whole, M) == doctest::Approx(f.l2_squared()).epsilon(1e-12));
    CHECK(arc_energy<double>(Signal::zeros(1, 8), whole, M) == 0.0);
    CHECK_THROWS_AS(arc_energy<double>(f, whole, 63), DomainError);

    // Disjoint Farey arcs plus complement recover the total.
    const ArcFamily fam(5, 5);
    std::vector<FareyArc> all;
    for (std::int64_t q = 1; q <= 5; ++q)
        for (const auto& a : fam.star_arcs(q)) all.push_back(a);
    const auto g = grid_spectrum(f, 1024);
    const auto m = grid_mask(all, 1024);
    double inside = 0, outside = 0;
    for (std::int64_t k = 0; k < 1024; ++k) (m[static_cast<std::size_t>(k)] ? inside : outside) += std::norm(g[k]);
    CHECK(arc_energy<double>(g, all) == doctest::Approx(inside / 1024));
    CHECK((inside + outside) / 1024 == doctest::Approx(f.l2_squared()).epsilon(1e-9));
}

TEST_CASE("arc_energy: residue-class set concentrates on M*_3 with wide arcs") {
    const std::int64_t N = 3000;
    Signal f = Signal::zeros(1, N);
    const double alpha = 1000.0 / N;
    for (std::int64_t x = 1; x <= N; ++x) f.values[x - 1] = (x % 3 == 1 ? 1.0 : 0.0) - alpha;
    const ArcFamily fam(3, N / 8);
    const auto star = fam.star_arcs(3);
    const double E = arc_energy<double>(f, star, default_grid_size(N));
    CHECK(E >= 0.9 * f.l2_squared());
}
