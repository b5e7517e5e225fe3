#include "primediff/lambda.hpp"

#include <cmath>
#include <string>

#include "primediff/errors.hpp"
#include "primediff/parallel.hpp"

namespace primediff::lambda {
namespace {

void check_range(std::int64_t N, std::int64_t d, const arith::ArithTables& tables) {
    if (N < 1 || d < 1) throw DomainError("lambda weight: N and d must be >= 1");
    if (d > (tables.n_max() - 1) / N) {
        throw DomainError("lambda weight: dN+1 exceeds table bound " + std::to_string(tables.n_max()));
    }
}

}  // namespace

LambdaWeight lambda_weight(std::int64_t N, std::int64_t d, const arith::ArithTables& tables) {
    check_range(N, d, tables);
    LambdaWeight w{N, d, spectral::Signal::zeros(1, N)};
    for (std::int64_t x = 1; x <= N; ++x) w.signal.values[static_cast<Eigen::Index>(x - 1)] = tables.mangoldt(d * x + 1);
    return w;
}

double lambda_hat_zero(std::int64_t N, std::int64_t d, const arith::ArithTables& tables) {
    check_range(N, d, tables);
    // n = 1 is in the class but Lambda(1) = 0.
    return arith::psi_upto(d * N + 1, d, 1, tables);
}

Complex lambda_hat_rational(std::int64_t N, std::int64_t d, std::int64_t a, std::int64_t q,
                            const arith::ArithTables& tables) {
    check_range(N, d, tables);
    if (q < 1) throw DomainError("lambda_hat_rational: q must be >= 1");
    Complex sum{0, 0};
    for (std::int64_t m = 0; m < q; ++m) {
        const double mass = arith::psi_upto(d * N + 1, d * q, m * d + 1, tables);
        if (mass != 0.0) sum += unit_root(-mod_floor(m * mod_floor(a, q), q), q) * mass;
    }
    return sum;
}

MajorArcPrediction major_prediction(std::int64_t N, std::int64_t d, std::int64_t a, std::int64_t q,
                                    const std::optional<arith::ExceptionalDatum>& exceptional,
                                    const arith::ArithTables& tables) {
    if (exceptional && d % exceptional->modulus != 0) {
        throw PreconditionError("major_prediction: exceptional modulus " + std::to_string(exceptional->modulus) +
                                " does not divide d = " + std::to_string(d));
    }
    const double lambda0 = lambda_hat_zero(N, d, tables);
    const double phis = static_cast<double>(arith::euler_phi(d) * arith::euler_phi(q));
    const Complex tau = arith::tau(-a, d, q);
    const double dN = static_cast<double>(d) * static_cast<double>(N);

    MajorArcPrediction p;
    p.main_term = dN * tau / phis;
    if (exceptional) {
        const double beta = exceptional->beta;
        p.exceptional_term = -std::pow(dN, beta) * tau / (phis * beta);
    }
    p.predicted_sup_bound = std::abs(lambda0) / static_cast<double>(arith::euler_phi(q));
    return p;
}

double vinogradov_bound(std::int64_t N, std::int64_t d, std::int64_t q, std::int64_t Q) {
    if (N < 3) throw DomainError("vinogradov_bound: N must be >= 3");
    if (q < 1 || q > Q) throw DomainError("vinogradov_bound: need 1 <= q <= Q");
    const double n = static_cast<double>(N);
    const double log4 = std::pow(std::log(n), 4);
    return static_cast<double>(d) * log4 *
           (n / std::sqrt(static_cast<double>(q)) + std::pow(n, 0.8) + std::sqrt(n * static_cast<double>(Q)));
}

std::vector<BoundReport> spectrum_report(const SpectrumRequest& r, const arith::ArithTables& tables) {
    if (r.exceptional && r.d % r.exceptional->modulus != 0) {
        throw PreconditionError("spectrum_report: exceptional modulus must divide d");
    }
    const auto weight = lambda_weight(r.N, r.d, tables);
    const auto grid = spectral::grid_spectrum(weight.signal, r.M);
    const double lambda0 = weight.mass();
    const spectral::ArcFamily family(r.Q_prime, r.Q);

    std::vector<BoundReport> rows(static_cast<std::size_t>(r.M));
    parallel_for(rows.size(), r.workers, [&](std::size_t i) {
        const auto k = static_cast<std::int64_t>(i);
        const auto cls = family.classify_grid(k, r.M);
        BoundReport row;
        row.k = k;
        row.theta = static_cast<double>(k) / static_cast<double>(r.M);
        row.a = cls.a;
        row.q = cls.q;
        row.arc_class = cls.arc_class;
        row.actual = std::abs(grid[k]);
        row.bound = cls.arc_class == spectral::ArcClass::major
                        ? std::abs(lambda0) / static_cast<double>(arith::euler_phi(cls.q))
                        : vinogradov_bound(r.N, r.d, cls.q, r.Q);
        row.ratio = row.bound > 0 ? row.actual / row.bound : 0.0;
        row.excess = std::max(0.0, row.actual - row.bound);
        rows[i] = row;
    });
    return rows;
}

double major_arc_concentration(const spectral::SpectrumGrid<double>& grid, double lambda0,
                               std::int64_t q_max, std::int64_t Q) {
    const spectral::ArcFamily family(std::min(q_max, Q), Q);
    double peak = 0.0;
    for (std::int64_t q = 1; q <= q_max; ++q) {
        const double phi = static_cast<double>(arith::euler_phi(q));
        for (const auto& arc : family.star_arcs(q)) {
            auto [lo, hi] = arc.grid_range(grid.M);
            hi = std::min(hi, lo + grid.M - 1);
            for (std::int64_t k = lo; k <= hi; ++k) peak = std::max(peak, phi * std::abs(grid[k]) / lambda0);
        }
    }
    return peak;
}

}  // namespace primediff::lambda
