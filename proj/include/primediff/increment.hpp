#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "primediff/spectral.hpp"

namespace primediff::increment {

/// A subset of {1, ..., N}.
class DensitySet {
public:
    DensitySet() = default;

    /// Sorts and validates; throws DomainError on out-of-range or repeated elements.
    static DensitySet make(std::int64_t N, std::vector<std::int64_t> elements);
    static DensitySet interval(std::int64_t N);

    std::int64_t N() const { return N_; }
    std::span<const std::int64_t> elements() const { return elements_; }
    std::int64_t size() const { return static_cast<std::int64_t>(elements_.size()); }
    double alpha() const { return N_ > 0 ? static_cast<double>(size()) / static_cast<double>(N_) : 0.0; }
    bool contains(std::int64_t x) const {
        return x >= 1 && x <= N_ && member_[static_cast<std::size_t>(x)];
    }

    /// 1_A - alpha 1_[N], supported on [1, N].
    spectral::Signal balanced_signal() const;

    friend bool operator==(const DensitySet& a, const DensitySet& b) {
        return a.N_ == b.N_ && a.elements_ == b.elements_;
    }

private:
    std::int64_t N_ = 0;
    std::vector<std::int64_t> elements_;
    std::vector<bool> member_;  // indexed 0..N
};

/// {first + j step : 0 <= j < length}.
struct Progression {
    std::int64_t first = 1;
    std::int64_t step = 1;
    std::int64_t length = 1;

    std::int64_t at(std::int64_t j) const { return first + j * step; }
    std::int64_t last() const { return at(length - 1); }
    std::int64_t count_in(const DensitySet& A) const;

    friend bool operator==(const Progression&, const Progression&) = default;
};

struct EnergyStats {
    std::int64_t q = 1;
    double eta = 0.0;
    double E_q_eta = 0.0;   // over M_{q,eta}, all a
    double E_star_q = 0.0;  // over M*_q, reduced a
    double total_energy = 0.0;
};

struct EnergyTable {
    std::int64_t M = 0;
    std::int64_t Q = 1;
    std::vector<EnergyStats> rows;  // q = 1..Q'
    double weighted_sum = 0.0;      // sum_q E*_q / phi(q)
    double total_energy = 0.0;      // (1 - alpha)/alpha up to quadrature
};

struct IncrementOutcome {
    Progression progression;
    std::int64_t intersection_count = 0;
    double new_alpha = 0.0;
    double measured_gain = 0.0;  // new_alpha / alpha - 1
    bool met_guarantee = false;
    bool trivial = false;        // alpha in {0, 1}
    double witness_c = 0.0;      // l2_witness: sum g^2 / (alpha^2 N L^2)
    double energy = 0.0;         // extract_progression: the E it was asked to realise
};

/// Scans every translate of P = {0, d, ..., (L-1)d} against A and returns the
/// densest one, with the L^2 mass c of (1_A - alpha 1_[N]) * 1_P. The flag
/// records whether the best translate reaches alpha (1+c) L - C_slack d L^2 / N.
IncrementOutcome l2_witness(const DensitySet& A, std::int64_t d, std::int64_t L, double C_slack = 2.0);

/// Normalised arc energies alpha^{-1}|A|^{-1} int |(1_A - alpha 1_[N])^|^2 over
/// M*_q and M_{q,1/(qQ)} for q <= Q'. Requires M >= 8N.
EnergyTable energy_table(const DensitySet& A, std::int64_t Q_prime, std::int64_t Q, std::int64_t M,
                         unsigned workers = 1);

struct ExtractionParams {
    double c_len = 0.25;
    double min_energy = 0.0;  // refuse at or below this
};

/// Densest step-q progression inside [1, N] of length
///     L = min(floor(1/(2 q eta)), floor(c_len min(1/eta, E|A|) / q)).
/// Returns nullopt (refusal) when E is at the threshold or L < 1.
std::optional<IncrementOutcome> extract_progression(const DensitySet& A, std::int64_t q, double eta,
                                                    double energy, const ExtractionParams& params = {});

/// Best step-d progression of length ceil(alpha N / (8d)) inside [1, N]; it
/// always holds at least alpha |P| / 2 elements of A.
IncrementOutcome averaging_projection(const DensitySet& A, std::int64_t d);

/// {j + 1 : first + j step in A} as a subset of [1, L].
DensitySet rescale(const DensitySet& A, const Progression& P);

/// result[i] = |A cap {lo + i + j step : j < L}| for lo + i in [lo, hi].
std::vector<std::int32_t> window_counts(const DensitySet& A, std::int64_t step, std::int64_t L,
                                        std::int64_t lo, std::int64_t hi);

}  // namespace primediff::increment
