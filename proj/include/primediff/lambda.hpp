#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "primediff/arith.hpp"
#include "primediff/farey.hpp"
#include "primediff/spectral.hpp"

namespace primediff::lambda {

/// Lambda_{N,d}(x) = Lambda(dx + 1) on 1 <= x <= N, zero elsewhere.
struct LambdaWeight {
    std::int64_t N = 0;
    std::int64_t d = 1;
    spectral::Signal signal;

    /// Lambda^_{N,d}(0), the total mass.
    double mass() const { return signal.values.real().sum(); }
};

/// Throws DomainError unless dN + 1 fits in the tables.
LambdaWeight lambda_weight(std::int64_t N, std::int64_t d, const arith::ArithTables& tables);

/// Lambda^_{N,d}(0) = psi(dN+1; d, 1).
double lambda_hat_zero(std::int64_t N, std::int64_t d, const arith::ArithTables& tables);

/// Lambda^_{N,d}(a/q) through the progression identity
///     sum_{m<q} e(-ma/q) psi(dN+1; dq, md+1),
/// which never touches the individual weights.
Complex lambda_hat_rational(std::int64_t N, std::int64_t d, std::int64_t a, std::int64_t q,
                            const arith::ArithTables& tables);

struct MajorArcPrediction {
    Complex main_term;
    Complex exceptional_term;  // zero without a datum
    double predicted_sup_bound = 0.0;

    Complex total() const { return main_term + exceptional_term; }
};

/// Main terms of Lambda^_{N,d}(a/q):
///     dN tau / (phi(d) phi(q))  -  (dN)^beta tau / (phi(d) phi(q) beta),
/// with tau taken at -a so the phase matches this library's e(-x theta)
/// transform. The bound is |Lambda^(0)| / phi(q).
MajorArcPrediction major_prediction(std::int64_t N, std::int64_t d, std::int64_t a, std::int64_t q,
                                    const std::optional<arith::ExceptionalDatum>& exceptional,
                                    const arith::ArithTables& tables);

/// d (log N)^4 (N/sqrt(q) + N^{4/5} + sqrt(NQ)), implied constant 1.
double vinogradov_bound(std::int64_t N, std::int64_t d, std::int64_t q, std::int64_t Q);

struct BoundReport {
    std::int64_t k = 0;  // grid index, theta = k/M
    double theta = 0.0;
    std::int64_t a = 0;
    std::int64_t q = 1;
    spectral::ArcClass arc_class = spectral::ArcClass::major;
    double actual = 0.0;
    double bound = 0.0;
    double ratio = 0.0;
    /// max(0, actual - bound): what an error term would have to absorb.
    double excess = 0.0;
};

struct SpectrumRequest {
    std::int64_t N = 0;
    std::int64_t d = 1;
    std::int64_t Q_prime = 1;
    std::int64_t Q = 1;
    std::int64_t M = 0;  // grid size; every k/M is reported
    std::optional<arith::ExceptionalDatum> exceptional;
    unsigned workers = 1;
};

/// One row per grid point k/M, ordered by k.
std::vector<BoundReport> spectrum_report(const SpectrumRequest& request, const arith::ArithTables& tables);

/// max over q <= q_max and grid points in M*_q (eta = 1/(qQ)) of
/// phi(q) |f^(theta)| / lambda0.
double major_arc_concentration(const spectral::SpectrumGrid<double>& grid, double lambda0,
                               std::int64_t q_max, std::int64_t Q);

}  // namespace primediff::lambda
