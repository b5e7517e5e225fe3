#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "primediff/arith.hpp"
#include "primediff/increment.hpp"

namespace primediff::driver {

/// Tunable constants of the density-increment loop. The asymptotic argument
/// leaves its constants implicit; each one is a knob here.
struct IterationConfig {
    double c = 0.05;               // N' = floor(c alpha N)
    double c_prime = 1.0;          // Q'  = d^4 log^8 N / (c'^2 alpha^2), clamped to q_cap
    double c_double_prime = 1.0;   // Q'' = 1 / (c''^2 alpha^2), clamped to Q'
    double eta = 0.5;              // progression-quality exponent, reported only
    std::int64_t D0 = 2;
    std::int64_t D1 = 2;
    std::int64_t grid_factor = 8;  // M = next power of two >= grid_factor N
    double gain_threshold = 0.05;  // accepted density gain per increment
    std::int64_t max_steps = 16;
    std::int64_t q_cap = 32;
    std::int64_t n_floor = 32;
    double alpha_floor = 1e-3;
    double d_ceiling_exponent = 0.25;  // d_ceiling = N^{exponent}
    double c_len = 0.25;
    double c_slack = 2.0;
    std::uint64_t seed = 0;
    unsigned workers = 1;  // not part of the effective configuration
    std::optional<arith::ExceptionalDatum> exceptional;  // synthetic mode only
    std::map<std::string, double> tolerances = default_tolerances();

    static std::map<std::string, double> default_tolerances();

    /// Throws DomainError on violated invariants.
    void validate() const;

    /// Flat key=value text, `#` comments; unknown keys throw DomainError.
    static IterationConfig parse(std::string_view text);

    /// Every effective key=value pair, in a fixed order.
    std::vector<std::pair<std::string, std::string>> effective_values() const;
};

/// Arc parameters used at one step.
struct ArcParameters {
    std::int64_t N_prime = 0;
    std::int64_t Q_prime = 1;
    std::int64_t Q_double_prime = 1;
    std::int64_t Q = 1;  // arcs have eta = 1/(qQ), Q = N / Q'
};

ArcParameters arc_parameters(std::int64_t N, std::int64_t d, double alpha, const IterationConfig& config);

/// <F, Lambda_{N',d}> for the four pieces of (1_A - alpha 1_I) * (1_{-A} - alpha 1_{-I}).
struct InnerProductStats {
    std::int64_t N_prime = 0;
    double lambda0 = 0.0;  // Lambda^_{N',d}(0)
    double aa = 0.0;       // <1_A * 1_{-A}, Lambda>
    double ia = 0.0;       // <1_I * 1_{-A}, Lambda>
    double ai = 0.0;       // <1_A * 1_{-I}, Lambda>
    double ii = 0.0;       // <1_I * 1_{-I}, Lambda>
    double delta = 0.0;    // combined product / (alpha^2 N lambda0)
    bool avoiding = false;
    /// |A| * Lambda-mass of x <= N' with dx+1 a proper prime power.
    double proper_power_bound = 0.0;
};

/// Returns nullopt when N' = floor(c alpha N) is zero (the SmallN signal).
/// For avoiding A, asserts that aa is carried only by proper prime powers.
std::optional<InnerProductStats> inner_product_stats(const increment::DensitySet& A, std::int64_t d,
                                                     const IterationConfig& config,
                                                     const arith::ArithTables& tables);

struct DensityIncrement {
    std::int64_t q = 1;
    increment::Progression progression;
    std::int64_t intersection_count = 0;
    double energy = 0.0;
    increment::DensitySet next;
};

struct StructureFound {
    std::int64_t x = 0;   // a - b
    std::uint64_t p = 0;  // d x + 1
    std::int64_t a = 0;
    std::int64_t b = 0;
};

struct SmallN {};
struct LargeDOrSmallAlpha {
    std::string reason;
};
struct SmallAlpha {};

using Outcome = std::variant<DensityIncrement, StructureFound, SmallN, LargeDOrSmallAlpha, SmallAlpha>;

enum class OutcomeTag { density_increment, structure_found, small_n, large_d_or_small_alpha, small_alpha, budget };

OutcomeTag tag_of(const Outcome& o);
std::string to_string(OutcomeTag tag);

struct State {
    increment::DensitySet A;
    std::int64_t d = 1;
};

struct StepRecord {
    std::int64_t step = 0;
    State state;
    ArcParameters arcs;
    Outcome outcome;
    std::vector<std::pair<std::int64_t, double>> energy_top;  // (q, E*_q), best first
    std::optional<InnerProductStats> inner;
};

struct Trace {
    IterationConfig config;
    std::vector<StepRecord> steps;
    OutcomeTag terminal = OutcomeTag::budget;
};

/// One pass of the case analysis; every path lands in an Outcome.
StepRecord iterate_once(const State& state, const IterationConfig& config, const arith::ArithTables& tables);

/// Iterates with rescaling until a non-increment outcome or max_steps.
Trace run(const increment::DensitySet& A, std::int64_t d, const IterationConfig& config,
          const arith::ArithTables& tables);

struct StepCheck {
    std::int64_t step = 0;
    bool pass = true;
    std::string message;
};

struct CertificationReport {
    std::vector<StepCheck> checks;
    bool passed() const;
    /// Throws CertificationError naming the first failing step.
    void require() const;
};

/// Re-verifies every step from the recorded sets: witness primality and
/// membership, recounts, the modulus chain, and energies on a coarse grid.
CertificationReport certify(const Trace& trace, const arith::ArithTables& tables);

}  // namespace primediff::driver
