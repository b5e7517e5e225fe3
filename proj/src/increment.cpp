#include "primediff/increment.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "primediff/arith.hpp"
#include "primediff/errors.hpp"
#include "primediff/farey.hpp"
#include "primediff/parallel.hpp"

namespace primediff::increment {

DensitySet DensitySet::make(std::int64_t N, std::vector<std::int64_t> elements) {
    if (N < 1) throw DomainError("DensitySet: N must be >= 1");
    std::sort(elements.begin(), elements.end());
    if (std::adjacent_find(elements.begin(), elements.end()) != elements.end()) {
        throw DomainError("DensitySet: repeated element");
    }
    if (!elements.empty() && (elements.front() < 1 || elements.back() > N)) {
        throw DomainError("DensitySet: element outside [1, " + std::to_string(N) + "]");
    }
    DensitySet s;
    s.N_ = N;
    s.member_.assign(static_cast<std::size_t>(N) + 1, false);
    for (const auto x : elements) s.member_[static_cast<std::size_t>(x)] = true;
    s.elements_ = std::move(elements);
    return s;
}

DensitySet DensitySet::interval(std::int64_t N) {
    std::vector<std::int64_t> all(static_cast<std::size_t>(N));
    for (std::int64_t i = 0; i < N; ++i) all[static_cast<std::size_t>(i)] = i + 1;
    return make(N, std::move(all));
}

spectral::Signal DensitySet::balanced_signal() const {
    auto f = spectral::Signal::zeros(1, N_);
    const double a = alpha();
    for (std::int64_t x = 1; x <= N_; ++x) {
        f.values[static_cast<Eigen::Index>(x - 1)] = (contains(x) ? 1.0 : 0.0) - a;
    }
    return f;
}

std::int64_t Progression::count_in(const DensitySet& A) const {
    std::int64_t c = 0;
    for (std::int64_t j = 0; j < length; ++j) c += A.contains(at(j)) ? 1 : 0;
    return c;
}

std::vector<std::int32_t> window_counts(const DensitySet& A, std::int64_t step, std::int64_t L,
                                        std::int64_t lo, std::int64_t hi) {
    std::vector<std::int32_t> out(static_cast<std::size_t>(std::max<std::int64_t>(hi - lo + 1, 0)), 0);
    for (std::int64_t r = 0; r < step && lo + r <= hi; ++r) {
        std::int64_t start = lo + r;
        std::int32_t count = 0;
        for (std::int64_t j = 0; j < L; ++j) count += A.contains(start + j * step) ? 1 : 0;
        for (; start <= hi; start += step) {
            out[static_cast<std::size_t>(start - lo)] = count;
            count -= A.contains(start) ? 1 : 0;
            count += A.contains(start + L * step) ? 1 : 0;
        }
    }
    return out;
}

namespace {

IncrementOutcome trivial_outcome(const DensitySet& A, std::int64_t step) {
    IncrementOutcome out;
    out.progression = {1, step, 1};
    out.intersection_count = out.progression.count_in(A);
    out.new_alpha = static_cast<double>(out.intersection_count);
    out.trivial = true;
    return out;
}

/// Index of the first maximum.
std::size_t argmax_first(const std::vector<std::int32_t>& v) {
    return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

}  // namespace

IncrementOutcome l2_witness(const DensitySet& A, std::int64_t d, std::int64_t L, double C_slack) {
    const std::int64_t N = A.N();
    if (d < 1 || L < 1 || L * d > N) throw DomainError("l2_witness: need d, L >= 1 and L d <= N");
    const double alpha = A.alpha();
    if (A.size() == 0 || A.size() == N) return trivial_outcome(A, d);

    // 1_A * 1_P(x) = |A cap {x - (L-1)d, ..., x}|, nonzero for x in [1, N + (L-1)d].
    const std::int64_t span = (L - 1) * d;
    const std::int64_t lo = 1 - span, hi = N;  // progression start points
    const auto counts = window_counts(A, d, L, lo, hi);

    double sum_sq = 0.0;
    for (std::int64_t s = lo; s <= hi; ++s) {
        // Points of {s, s+d, ..., s+span} inside [1, N].
        const std::int64_t j_lo = s >= 1 ? 0 : (1 - s + d - 1) / d;
        const std::int64_t j_hi = std::min<std::int64_t>(L - 1, (N - s) / d);
        const double inside = static_cast<double>(std::max<std::int64_t>(j_hi - j_lo + 1, 0));
        const double g = counts[static_cast<std::size_t>(s - lo)] - alpha * inside;
        sum_sq += g * g;
    }
    const double c = sum_sq / (alpha * alpha * static_cast<double>(N) * static_cast<double>(L * L));

    const auto best = argmax_first(counts);
    IncrementOutcome out;
    out.progression = {lo + static_cast<std::int64_t>(best), d, L};
    out.intersection_count = counts[best];
    out.new_alpha = static_cast<double>(out.intersection_count) / static_cast<double>(L);
    out.measured_gain = out.new_alpha / alpha - 1.0;
    out.witness_c = c;
    const double target = alpha * (1.0 + c) * static_cast<double>(L) -
                          C_slack * static_cast<double>(d) * static_cast<double>(L * L) / static_cast<double>(N);
    out.met_guarantee = static_cast<double>(out.intersection_count) >= target;
    return out;
}

EnergyTable energy_table(const DensitySet& A, std::int64_t Q_prime, std::int64_t Q, std::int64_t M,
                         unsigned workers) {
    if (M < 8 * A.N()) {
        throw DomainError("energy_table: grid " + std::to_string(M) + " is below 8N = " + std::to_string(8 * A.N()));
    }
    const spectral::ArcFamily family(std::min(Q_prime, Q), std::max(Q_prime, Q));
    EnergyTable table;
    table.M = M;
    table.Q = family.Q();
    table.rows.resize(static_cast<std::size_t>(Q_prime));
    for (std::int64_t q = 1; q <= Q_prime; ++q) {
        auto& row = table.rows[static_cast<std::size_t>(q - 1)];
        row.q = q;
        row.eta = std::min(0.5, 1.0 / (static_cast<double>(q) * static_cast<double>(table.Q)));
    }
    if (A.size() == 0) return table;

    const auto grid = spectral::grid_spectrum(A.balanced_signal(), M);
    const double norm = A.alpha() * static_cast<double>(A.size());
    table.total_energy = grid.mean_square() / norm;

    parallel_for(table.rows.size(), workers, [&](std::size_t i) {
        auto& row = table.rows[i];
        const auto star = family.star_arcs(row.q);
        const auto all = family.all_arcs(row.q);
        row.E_star_q = spectral::arc_energy<double>(grid, star) / norm;
        row.E_q_eta = spectral::arc_energy<double>(grid, all) / norm;
        row.total_energy = table.total_energy;
    });
    for (const auto& row : table.rows) table.weighted_sum += row.E_star_q / static_cast<double>(arith::euler_phi(row.q));
    return table;
}

std::optional<IncrementOutcome> extract_progression(const DensitySet& A, std::int64_t q, double eta,
                                                    double energy, const ExtractionParams& params) {
    const std::int64_t N = A.N();
    if (q < 1 || !(eta > 0.0)) throw DomainError("extract_progression: need q >= 1 and eta > 0");
    if (A.size() == 0 || A.size() == N) return std::nullopt;
    if (!(energy > params.min_energy) || !(energy > 0.0)) return std::nullopt;

    const double qd = static_cast<double>(q);
    const double by_arc = 1.0 / (2.0 * qd * eta);
    const double by_energy = params.c_len * std::min(1.0 / eta, energy * static_cast<double>(A.size())) / qd;
    // Relative slack so that 1/(2 q eta) with eta = 1/(qQ) lands on Q/2 exactly.
    const auto L_limit = static_cast<std::int64_t>(std::floor(std::min(by_arc, by_energy) * (1.0 + 1e-12)));
    const std::int64_t L = std::min(L_limit, (N - 1) / q + 1);
    if (L < 1) return std::nullopt;

    const std::int64_t last_start = N - (L - 1) * q;
    const auto counts = window_counts(A, q, L, 1, last_start);
    const auto best = argmax_first(counts);

    IncrementOutcome out;
    out.progression = {1 + static_cast<std::int64_t>(best), q, L};
    out.intersection_count = counts[best];
    out.new_alpha = static_cast<double>(out.intersection_count) / static_cast<double>(L);
    out.measured_gain = out.new_alpha / A.alpha() - 1.0;
    out.energy = energy;
    // count >= alpha (1 + E/4) L  <=>  4 count N >= |A| L (4 + E)
    const long double lhs = 4.0L * out.intersection_count * N;
    const long double rhs = static_cast<long double>(A.size()) * L * (4.0L + energy);
    out.met_guarantee = lhs >= rhs;
    return out;
}

IncrementOutcome averaging_projection(const DensitySet& A, std::int64_t d) {
    const std::int64_t N = A.N();
    if (d < 1 || d > N) throw DomainError("averaging_projection: need 1 <= d <= N");
    // ceil(alpha N / (8 d)) with alpha N = |A|.
    const std::int64_t L = std::max<std::int64_t>(1, (A.size() + 8 * d - 1) / (8 * d));
    const std::int64_t last_start = N - (L - 1) * d;
    const auto counts = window_counts(A, d, L, 1, last_start);
    const auto best = argmax_first(counts);

    IncrementOutcome out;
    out.progression = {1 + static_cast<std::int64_t>(best), d, L};
    out.intersection_count = counts[best];
    out.new_alpha = static_cast<double>(out.intersection_count) / static_cast<double>(L);
    out.measured_gain = A.size() > 0 ? out.new_alpha / A.alpha() - 1.0 : 0.0;
    out.trivial = A.size() == 0;
    // |A cap P| >= alpha |P| / 2  <=>  2 count N >= |A| L
    out.met_guarantee = 2 * out.intersection_count * N >= A.size() * L;
    if (!out.met_guarantee) {
        throw std::logic_error("averaging_projection: no translate reaches alpha |P| / 2 (d = " +
                               std::to_string(d) + ")");
    }
    return out;
}

DensitySet rescale(const DensitySet& A, const Progression& P) {
    if (P.length < 1 || P.step < 1 || P.first < 1 || P.last() > A.N()) {
        throw DomainError("rescale: progression must lie inside [1, N]");
    }
    std::vector<std::int64_t> out;
    for (std::int64_t j = 0; j < P.length; ++j) {
        if (A.contains(P.at(j))) out.push_back(j + 1);
    }
    return DensitySet::make(P.length, std::move(out));
}

}  // namespace primediff::increment
