#pragma once

#include <chrono>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace primediff::avoider {

/// Bit s (1 <= s <= N-1) is set iff d s + 1 is prime.
class ForbiddenSet {
public:
    /// Throws DomainError when d (N-1) + 1 overflows 64 bits.
    static ForbiddenSet build(std::int64_t N, std::int64_t d);

    std::int64_t N() const { return N_; }
    std::int64_t d() const { return d_; }
    bool forbidden(std::int64_t s) const {
        if (s < 0) s = -s;
        return s >= 1 && s < N_ && ((bits_[static_cast<std::size_t>(s) >> 6] >> (s & 63)) & 1u);
    }
    std::vector<std::int64_t> members() const;

private:
    std::int64_t N_ = 0;
    std::int64_t d_ = 1;
    std::vector<std::uint64_t> bits_;
};

/// True iff no difference of two elements of A is forbidden.
bool is_avoiding(std::span<const std::int64_t> A, const ForbiddenSet& F);

struct SearchResult {
    std::vector<std::int64_t> best_set;
    std::int64_t size = 0;
    bool optimal = false;
    std::uint64_t nodes_explored = 0;
    std::chrono::nanoseconds wall_time{0};
    std::string strategy;
    std::uint64_t seed = 0;
};

inline constexpr std::int64_t kExactModeCap = 64;

/// Maximum avoiding subset of [1, N] by branch and bound over bitsets. When
/// `node_budget` is hit the best set found so far is returned with
/// optimal = false. N above `cap` is refused unless a budget is given.
SearchResult max_avoiding_exact(const ForbiddenSet& F, std::uint64_t node_budget = 0,
                                std::int64_t cap = kExactModeCap);

enum class GreedyStrategy { first_fit, random_local };

GreedyStrategy parse_strategy(const std::string& name);
std::string to_string(GreedyStrategy s);

/// first_fit: ascending scan keeping every compatible element.
/// random_local: seeded random order, then remove-1/add-2 swaps until no
/// improving move exists or `max_passes` runs out.
SearchResult greedy_avoiding(const ForbiddenSet& F, GreedyStrategy strategy, std::uint64_t seed,
                             int max_passes = 50);

struct GrowthRow {
    std::int64_t N = 0;
    std::int64_t size = 0;
    bool optimal = false;
    double log_size = 0.0;
    double shape = 0.0;  // (log 2 / 2) log N / log log N
};

/// (log 2 / 2) log N / log log N, defined for N >= 3.
double growth_shape(std::int64_t N);

/// Exact search up to the exact-mode cap, seeded local search beyond it.
std::vector<GrowthRow> growth_table(std::span<const std::int64_t> Ns, std::int64_t d, std::uint64_t seed = 0);

}  // namespace primediff::avoider
