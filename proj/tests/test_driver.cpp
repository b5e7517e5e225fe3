#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "primediff/avoider.hpp"
#include "primediff/driver.hpp"
#include "primediff/errors.hpp"
#include "primediff/primality.hpp"

using namespace primediff;
using namespace primediff::driver;
using increment::DensitySet;

namespace {

const arith::ArithTables& tables() {
    static const arith::ArithTables t = arith::build_tables(2'000'001);
    return t;
}

DensitySet greedy_set(std::int64_t N, std::int64_t d) {
    const auto F = avoider::ForbiddenSet::build(N, d);
    return DensitySet::make(N, avoider::greedy_avoiding(F, avoider::GreedyStrategy::first_fit, 0).best_set);
}

}  // namespace

TEST_CASE("IterationConfig: defaults, parse, validate") {
    IterationConfig c;
    CHECK_NOTHROW(c.validate());
    const auto parsed = IterationConfig::parse("# comment\nc = 0.1\n\nmax_steps=4  # trailing\ntol.c_E = 3\n");
    CHECK(parsed.c == 0.1);
    CHECK(parsed.max_steps == 4);
    CHECK(parsed.tolerances.at("c_E") == 3.0);
    CHECK(parsed.c_prime == 1.0);
    CHECK_THROWS_AS(IterationConfig::parse("bogus = 1"), DomainError);
    CHECK_THROWS_AS(IterationConfig::parse("tol.c_7 = 1"), DomainError);
    CHECK_THROWS_AS(IterationConfig::parse("c = abc"), DomainError);
    CHECK_THROWS_AS(IterationConfig::parse("c"), DomainError);
    CHECK_THROWS_AS(IterationConfig::parse("c = 1.5"), DomainError);
    CHECK_THROWS_AS(IterationConfig::parse("D0 = 3\nD1 = 2"), DomainError);
    CHECK_THROWS_AS(IterationConfig::parse("tol.C = 0"), DomainError);
    CHECK_THROWS_AS(IterationConfig::parse("exceptional_modulus = 3"), DomainError);
    const auto ex = IterationConfig::parse("exceptional_modulus = 3\nexceptional_beta = 0.9");
    REQUIRE(ex.exceptional);
    CHECK(ex.exceptional->modulus == 3);

    const auto kv = c.effective_values();
    CHECK(kv.front().first == "c");
    bool has_workers = false, has_tol = false;
    for (const auto& [k, v] : kv) {
        has_workers |= k == "workers";
        has_tol |= k == "tol.certify_energy_rel";
    }
    CHECK_FALSE(has_workers);
    CHECK(has_tol);
    for (const char* name : {"c_1", "c_2", "c_3", "c_4", "c_5", "c_6", "c_8", "c_9", "c_10", "c_E", "C"})
        CHECK(c.tolerances.contains(name));
}

TEST_CASE("arc_parameters") {
    IterationConfig c;
    const auto p = arc_parameters(1000, 1, 0.1, c);
    CHECK(p.N_prime == 5);
    CHECK(p.Q_prime == c.q_cap);
    CHECK(p.Q_double_prime == 32);  // ceil(1/0.01) = 100, clamped to Q'
    CHECK(p.Q == std::max<std::int64_t>(32, 1000 / 32));
    const auto dense = arc_parameters(1000, 1, 0.9, c);
    CHECK(dense.Q_double_prime == 2);
    CHECK(arc_parameters(10, 1, 0.5, c).Q_prime <= 10);
}

TEST_CASE("inner_product_stats") {
    const auto& t = tables();
    IterationConfig c;
    const auto full = inner_product_stats(DensitySet::interval(400), 1, c, t);
    REQUIRE(full);
    CHECK(std::abs(full->delta) <= 1e-12);
    CHECK_FALSE(full->avoiding);
    CHECK_FALSE(inner_product_stats(DensitySet::make(10, {1}), 1, c, t));

    // Proper prime powers only: x + 1 in {4, 8, 9, 16, 25, 27, ...}.
    IterationConfig wide;
    wide.c = 0.9;
    const auto A = greedy_set(2000, 1);
    const auto s = inner_product_stats(A, 1, wide, t);
    REQUIRE(s);
    CHECK(s->avoiding);
    double aa = 0;
    for (const auto a : A.elements())
        for (const auto b : A.elements()) {
            const auto x = a - b;
            if (x < 1 || x > s->N_prime) continue;
            CHECK_FALSE(oracle::is_prime(x + 1));
            aa += oracle::mangoldt(x + 1);
        }
    CHECK(s->aa == doctest::Approx(aa).epsilon(1e-12));
    CHECK(s->aa <= s->proper_power_bound + 1e-9);

    // window term against a double loop at N = 500
    const auto B = DensitySet::make(500, {3, 17, 40, 41, 99, 250, 251, 499});
    IterationConfig c5;
    c5.c = 0.99;
    const auto sb = inner_product_stats(B, 2, c5, t);
    REQUIRE(sb);
    double ii = 0, ia = 0, ai = 0, lam0 = 0;
    for (std::int64_t x = 1; x <= sb->N_prime; ++x) {
        const double L = oracle::mangoldt(2 * x + 1);
        lam0 += L;
        for (std::int64_t b = 1; b <= 500; ++b) {
            if (b + x > 500) continue;
            ii += L;
            ia += B.contains(b) * L;
            ai += B.contains(b + x) * L;
        }
    }
    CHECK(sb->ii == doctest::Approx(ii).epsilon(1e-12));
    CHECK(sb->ia == doctest::Approx(ia).epsilon(1e-12));
    CHECK(sb->ai == doctest::Approx(ai).epsilon(1e-12));
    CHECK(sb->lambda0 == doctest::Approx(lam0).epsilon(1e-12));
}

TEST_CASE("iterate_once: examples") {
    const auto& t = tables();
    IterationConfig c;
    const auto s = iterate_once({DensitySet::interval(100), 1}, c, t);
    const auto* w = std::get_if<StructureFound>(&s.outcome);
    REQUIRE(w);
    CHECK(w->x == 1);
    CHECK(w->p == 2);
    CHECK(w->a - w->b == 1);

    CHECK(std::holds_alternative<SmallN>(iterate_once({DensitySet::make(3, {1, 2}), 1}, c, t).outcome));
    CHECK(std::holds_alternative<SmallAlpha>(iterate_once({DensitySet::make(5000, {7}), 1}, c, t).outcome));

    // {x = 1 mod 3} thinned to avoid x with x + 1 prime: all energy sits at q = 3.
    const std::int64_t N = 3000;
    std::vector<std::int64_t> keep;
    const auto F = avoider::ForbiddenSet::build(N, 1);
    for (std::int64_t x = 1; x <= N; x += 3) {
        bool ok = true;
        for (const auto y : keep) ok = ok && !F.forbidden(x - y);
        if (ok) keep.push_back(x);
    }
    const auto A = DensitySet::make(N, keep);
    // The filter leaves 18 elements, so N' = floor(c alpha N) needs a larger c.
    IterationConfig lenient = c;
    lenient.alpha_floor = 1e-4;
    lenient.c = 0.5;
    const auto r = iterate_once({A, 1}, lenient, t);
    const auto* inc = std::get_if<DensityIncrement>(&r.outcome);
    REQUIRE(inc);
    CHECK(inc->q == 3);
    CHECK(inc->progression.count_in(A) == inc->intersection_count);
    CHECK(!r.energy_top.empty());
    CHECK(r.energy_top.size() == 5);

    // d past N^{1/4}
    const auto big_d = iterate_once({greedy_set(2000, 11), 11}, c, t);
    CHECK(std::holds_alternative<LargeDOrSmallAlpha>(big_d.outcome));

    IterationConfig ex;
    ex.exceptional = arith::ExceptionalDatum::make(4, 0.9);
    CHECK_THROWS_AS(iterate_once({greedy_set(1000, 2), 2}, ex, t), PreconditionError);
}

TEST_CASE("run and certify") {
    const auto& t = tables();
    IterationConfig c;
    const auto tr = run(DensitySet::interval(100), 1, c, t);
    REQUIRE(tr.steps.size() == 1);
    CHECK(tr.steps[0].step == 1);
    CHECK(tr.terminal == OutcomeTag::structure_found);
    const auto rep = certify(tr, t);
    CHECK(rep.passed());
    CHECK_NOTHROW(rep.require());

    const auto g = run(greedy_set(10000, 1), 1, c, t);
    CHECK(g.terminal != OutcomeTag::structure_found);
    CHECK(certify(g, t).passed());
    for (std::size_t i = 0; i + 1 < g.steps.size(); ++i) {
        const double a0 = g.steps[i].state.A.alpha(), a1 = g.steps[i + 1].state.A.alpha();
        CHECK(a1 >= a0 * (1 + c.gain_threshold) * (1 - 1e-12));
        CHECK(g.steps[i + 1].state.d % g.steps[i].state.d == 0);
        const auto& A = g.steps[i].state.A;
        const auto F = avoider::ForbiddenSet::build(A.N(), g.steps[i].state.d);
        CHECK(avoider::is_avoiding(A.elements(), F));
    }

    IterationConfig one = c;
    one.max_steps = 1;
    const std::int64_t N = 3000;
    std::vector<std::int64_t> keep;
    const auto F = avoider::ForbiddenSet::build(N, 1);
    for (std::int64_t x = 1; x <= N; x += 3) {
        bool ok = true;
        for (const auto y : keep) ok = ok && !F.forbidden(x - y);
        if (ok) keep.push_back(x);
    }
    one.alpha_floor = 1e-4;
    one.c = 0.5;
    auto budget = run(DensitySet::make(N, keep), 1, one, t);
    CHECK(budget.terminal == OutcomeTag::budget);
    REQUIRE(budget.steps.size() == 1);
    CHECK(certify(budget, t).passed());

    // Tampering is caught at the tampered step.
    std::get<DensityIncrement>(budget.steps[0].outcome).intersection_count += 1;
    const auto bad = certify(budget, t);
    CHECK_FALSE(bad.passed());
    try {
        bad.require();
        FAIL("expected a certification error");
    } catch (const CertificationError& e) {
        CHECK(e.step() == 1);
    }

    auto forged = tr;
    std::get<StructureFound>(forged.steps[0].outcome).p = 4;
    CHECK_FALSE(certify(forged, t).passed());
}

TEST_CASE("to_string(OutcomeTag)") {
    CHECK(to_string(OutcomeTag::density_increment) == "DensityIncrement");
    CHECK(to_string(OutcomeTag::structure_found) == "StructureFound");
    CHECK(to_string(OutcomeTag::small_n) == "SmallN");
    CHECK(to_string(OutcomeTag::large_d_or_small_alpha) == "LargeDOrSmallAlpha");
    CHECK(to_string(OutcomeTag::small_alpha) == "SmallAlpha");
    CHECK(to_string(OutcomeTag::budget) == "Budget");
}
