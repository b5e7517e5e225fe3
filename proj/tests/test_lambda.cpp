#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "primediff/errors.hpp"
#include "primediff/lambda.hpp"

using namespace primediff;
using namespace primediff::lambda;

namespace {
const arith::ArithTables& tables() {
    static const arith::ArithTables t = arith::build_tables(200001);
    return t;
}
}  // namespace

TEST_CASE("lambda_weight") {
    const auto& t = tables();
    const auto w = lambda_weight(5, 2, t);
    CHECK(w.signal.offset == 1);
    REQUIRE(w.signal.size() == 5);
    const double want[] = {std::log(3.0), std::log(5.0), std::log(7.0), std::log(3.0), std::log(11.0)};
    for (int i = 0; i < 5; ++i) CHECK(w.signal.values[i].real() == doctest::Approx(want[i]));
    CHECK(lambda_hat_zero(5, 2, t) == doctest::Approx(8.150468).epsilon(1e-6));
    CHECK(lambda_hat_zero(9, 1, t) == doctest::Approx(7.832015).epsilon(1e-6));
    const auto one = lambda_weight(1, 1, t);
    CHECK(one.signal.size() == 1);
    CHECK(one.mass() == doctest::Approx(std::log(2.0)));
    CHECK_THROWS_AS(lambda_weight(200001, 1, t), DomainError);
    CHECK_THROWS_AS(lambda_weight(0, 1, t), DomainError);
    for (std::int64_t N = 2; N < 300; N += 37) CHECK(lambda_hat_zero(N, 3, t) > 0);
}

TEST_CASE("lambda_hat_rational: examples") {
    const auto& t = tables();
    CHECK(lambda_hat_rational(40, 3, 0, 1, t).real() == doctest::Approx(arith::psi_upto(121, 3, 1, t)));
    const auto v = lambda_hat_rational(9, 1, 1, 2, t);
    const double want = -3 * std::log(2.0) + 2 * std::log(3.0) + std::log(5.0) + std::log(7.0);
    CHECK(v.real() == doctest::Approx(want).epsilon(1e-9));
    CHECK(v.real() == doctest::Approx(3.673129).epsilon(1e-6));
    CHECK(std::abs(v.imag()) <= 1e-9);
    CHECK_THROWS_AS(lambda_hat_rational(9, 1, 1, 0, t), DomainError);
}

TEST_CASE("lambda_hat_rational: identity against direct transform") {
    const auto& t = tables();
    for (std::int64_t d : {1, 2, 6}) {
        const auto w = lambda_weight(600, d, t);
        std::vector<oracle::cd> vals;
        for (std::int64_t x = 1; x <= 600; ++x) vals.emplace_back(oracle::mangoldt(d * x + 1));
        const double zero = lambda_hat_zero(600, d, t);
        for (std::int64_t q = 1; q <= 12; ++q)
            for (std::int64_t a = 0; a < q; ++a) {
                const auto lhs = lambda_hat_rational(600, d, a, q, t);
                const auto rhs = oracle::transform(vals, 1, double(a) / double(q));
                CHECK(std::abs(lhs - rhs) <= 1e-6 * zero);
                CHECK(std::abs(lhs - spectral::transform_at(w.signal, spectral::TorusPoint::rational(a, q))) <=
                      1e-9 * zero);
            }
    }
}

TEST_CASE("major_prediction") {
    const auto& t = tables();
    const auto p1 = major_prediction(1000, 6, 0, 1, std::nullopt, t);
    CHECK(p1.main_term.real() == doctest::Approx(6000.0 / 2.0));
    CHECK(p1.exceptional_term == Complex(0.0));
    CHECK(p1.predicted_sup_bound == doctest::Approx(lambda_hat_zero(1000, 6, t)));

    // beta -> 1: main and exceptional terms cancel
    const auto ex = arith::ExceptionalDatum::make(3, 1.0 - 1e-12);
    const auto p2 = major_prediction(1000, 6, 1, 5, ex, t);
    CHECK(std::abs(p2.total()) <= 1e-6 * std::abs(p2.main_term));
    CHECK(std::abs(p2.exceptional_term) > 0);

    // gcd(d, q) > 1 kills the main term
    CHECK(std::abs(major_prediction(1000, 6, 1, 4, std::nullopt, t).main_term) <= 1e-9);

    CHECK_THROWS_AS(major_prediction(1000, 4, 1, 3, arith::ExceptionalDatum::make(3, 0.8), t), PreconditionError);

    // N = 1e5, q = 3: |main| = N/2 and the exact transform agrees within 5%
    const auto p3 = major_prediction(100000, 1, 1, 3, std::nullopt, t);
    CHECK(std::abs(p3.main_term) == doctest::Approx(50000.0));
    const auto exact = lambda_hat_rational(100000, 1, 1, 3, t);
    CHECK(std::abs(exact - p3.main_term) <= 0.05 * std::abs(p3.main_term));
    CHECK(p3.predicted_sup_bound == doctest::Approx(lambda_hat_zero(100000, 1, t) / 2));
}

TEST_CASE("vinogradov_bound") {
    const double L4 = std::pow(std::log(1e5), 4);
    const double want = L4 * (1e5 / 10.0 + std::pow(1e5, 0.8) + std::sqrt(1e5 * 1e3));
    CHECK(vinogradov_bound(100000, 1, 100, 1000) == doctest::Approx(want).epsilon(1e-12));
    CHECK(vinogradov_bound(100000, 1, 100, 1000) == doctest::Approx(5.27e8).epsilon(0.01));
    CHECK(vinogradov_bound(5000, 2, 7, 30) == doctest::Approx(2 * vinogradov_bound(5000, 1, 7, 30)));
    for (std::int64_t q = 2; q <= 100; ++q)
        CHECK(vinogradov_bound(100000, 1, q, 1000) <= vinogradov_bound(100000, 1, q - 1, 1000));
    CHECK_THROWS_AS(vinogradov_bound(2, 1, 1, 1), DomainError);
    CHECK_THROWS_AS(vinogradov_bound(100, 1, 5, 4), DomainError);
    CHECK_THROWS_AS(vinogradov_bound(100, 1, 0, 4), DomainError);
}

TEST_CASE("spectrum_report") {
    const auto& t = tables();
    SpectrumRequest req{2000, 1, 8, 250, 16384, std::nullopt, 1};
    const auto rows = spectrum_report(req, t);
    REQUIRE(rows.size() == 16384);
    CHECK(rows[0].theta == 0.0);
    CHECK(rows[0].q == 1);
    CHECK(rows[0].ratio == doctest::Approx(1.0));
    for (const auto& r : rows) {
        if (r.arc_class == spectral::ArcClass::minor) CHECK(r.ratio <= 1.0);
        CHECK(r.excess >= 0);
        if (r.bound > 0) CHECK(r.ratio == doctest::Approx(r.actual / r.bound));
    }
    req.workers = 4;
    const auto again = spectrum_report(req, t);
    for (std::size_t i = 0; i < rows.size(); i += 101) {
        CHECK(again[i].actual == rows[i].actual);
        CHECK(again[i].q == rows[i].q);
    }
    req.exceptional = arith::ExceptionalDatum::make(2, 0.9);
    CHECK_THROWS_AS(spectrum_report(req, t), PreconditionError);
}

TEST_CASE("major_arc_concentration") {
    const auto& t = tables();
    const auto w = lambda_weight(5000, 1, t);
    const auto g = spectral::grid_spectrum(w.signal, spectral::default_grid_size(5000));
    const double c = major_arc_concentration(g, w.mass(), 10, 500);
    CHECK(c >= 1.0 - 1e-12);  // theta = 0 alone gives 1
    CHECK(c < 3.0);
}
