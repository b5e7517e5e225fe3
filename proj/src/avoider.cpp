#include "primediff/avoider.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include "primediff/errors.hpp"
#include "primediff/primality.hpp"

namespace primediff::avoider {

ForbiddenSet ForbiddenSet::build(std::int64_t N, std::int64_t d) {
    if (N < 1 || d < 1) throw DomainError("forbidden_differences: N and d must be >= 1");
    constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
    if (N > 1 && static_cast<std::uint64_t>(d) > (kMax - 1) / static_cast<std::uint64_t>(N - 1)) {
        throw DomainError("forbidden_differences: d(N-1)+1 overflows 64 bits");
    }
    ForbiddenSet F;
    F.N_ = N;
    F.d_ = d;
    F.bits_.assign(static_cast<std::size_t>(N / 64 + 1), 0);
    for (std::int64_t s = 1; s < N; ++s) {
        const auto v = static_cast<std::uint64_t>(d) * static_cast<std::uint64_t>(s) + 1;
        if (is_prime_u64(v)) F.bits_[static_cast<std::size_t>(s) >> 6] |= std::uint64_t{1} << (s & 63);
    }
    return F;
}

std::vector<std::int64_t> ForbiddenSet::members() const {
    std::vector<std::int64_t> out;
    for (std::int64_t s = 1; s < N_; ++s) {
        if (forbidden(s)) out.push_back(s);
    }
    return out;
}

bool is_avoiding(std::span<const std::int64_t> A, const ForbiddenSet& F) {
    for (std::size_t i = 0; i < A.size(); ++i) {
        for (std::size_t j = i + 1; j < A.size(); ++j) {
            if (F.forbidden(A[j] - A[i])) return false;
        }
    }
    return true;
}

namespace {

/// Multiword bitset over positions 0..n-1 (position i stands for i + 1).
class Bits {
public:
    Bits() = default;
    explicit Bits(std::size_t n) : words_((n + 63) / 64, 0) {}

    void set(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
    void reset(std::size_t i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
    bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }

    std::size_t count() const {
        std::size_t c = 0;
        for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }
    bool any() const {
        return std::any_of(words_.begin(), words_.end(), [](auto w) { return w != 0; });
    }
    std::size_t count_and(const Bits& o) const {
        std::size_t c = 0;
        for (std::size_t k = 0; k < words_.size(); ++k) c += static_cast<std::size_t>(std::popcount(words_[k] & o.words_[k]));
        return c;
    }
    Bits operator&(const Bits& o) const {
        Bits r = *this;
        for (std::size_t k = 0; k < words_.size(); ++k) r.words_[k] &= o.words_[k];
        return r;
    }
    template <typename Fn>
    void for_each(Fn&& fn) const {
        for (std::size_t k = 0; k < words_.size(); ++k) {
            for (std::uint64_t w = words_[k]; w != 0; w &= w - 1) fn(k * 64 + static_cast<std::size_t>(std::countr_zero(w)));
        }
    }

private:
    std::vector<std::uint64_t> words_;
};

/// compat[i]: positions j != i with |i - j| not forbidden.
std::vector<Bits> compatibility(const ForbiddenSet& F) {
    const auto n = static_cast<std::size_t>(F.N());
    std::vector<Bits> compat(n, Bits(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j && !F.forbidden(static_cast<std::int64_t>(i) - static_cast<std::int64_t>(j))) compat[i].set(j);
        }
    }
    return compat;
}

struct BranchAndBound {
    const std::vector<Bits>& compat;
    std::uint64_t budget;
    std::uint64_t nodes = 0;
    bool exhausted = false;
    std::vector<std::size_t> current;
    std::vector<std::size_t> best;

    void expand(Bits candidates) {
        if (exhausted) return;
        if (budget != 0 && nodes >= budget) {
            exhausted = true;
            return;
        }
        ++nodes;
        if (current.size() > best.size()) best = current;
        while (candidates.any()) {
            if (current.size() + candidates.count() <= best.size()) return;
            // Branch on the candidate with the fewest compatible successors.
            std::size_t pick = 0, fewest = std::numeric_limits<std::size_t>::max();
            candidates.for_each([&](std::size_t v) {
                const std::size_t deg = candidates.count_and(compat[v]);
                if (deg < fewest) fewest = deg, pick = v;
            });
            current.push_back(pick);
            expand(candidates & compat[pick]);
            current.pop_back();
            if (exhausted) return;
            candidates.reset(pick);
        }
    }
};

std::vector<std::int64_t> to_elements(const std::vector<std::size_t>& positions) {
    std::vector<std::int64_t> out;
    out.reserve(positions.size());
    for (auto p : positions) out.push_back(static_cast<std::int64_t>(p) + 1);
    std::sort(out.begin(), out.end());
    return out;
}

void finish(SearchResult& r, const ForbiddenSet& F, std::chrono::steady_clock::time_point t0) {
    r.size = static_cast<std::int64_t>(r.best_set.size());
    r.wall_time = std::chrono::steady_clock::now() - t0;
    if (!is_avoiding(r.best_set, F)) throw std::logic_error("avoider: emitted set is not avoiding");
}

}  // namespace

SearchResult max_avoiding_exact(const ForbiddenSet& F, std::uint64_t node_budget, std::int64_t cap) {
    if (F.N() > cap && node_budget == 0) {
        throw DomainError("max_avoiding_exact: N = " + std::to_string(F.N()) + " exceeds exact-mode cap " +
                          std::to_string(cap) + " without a node budget");
    }
    const auto t0 = std::chrono::steady_clock::now();
    const auto compat = compatibility(F);

    // Translating an avoiding set keeps it avoiding, so some optimum has
    // minimum 1: position 0 is always chosen.
    BranchAndBound bb{compat, node_budget, 0, false, {}, {}};
    bb.current.push_back(0);
    bb.expand(compat[0]);

    SearchResult r;
    r.strategy = "exact";
    r.best_set = to_elements(bb.best);
    r.optimal = !bb.exhausted;
    r.nodes_explored = bb.nodes;
    finish(r, F, t0);
    return r;
}

GreedyStrategy parse_strategy(const std::string& name) {
    if (name == "first-fit" || name == "first_fit") return GreedyStrategy::first_fit;
    if (name == "random-local" || name == "random_local") return GreedyStrategy::random_local;
    throw DomainError("unknown greedy strategy '" + name + "'");
}

std::string to_string(GreedyStrategy s) {
    return s == GreedyStrategy::first_fit ? "first-fit" : "random-local";
}

namespace {

/// conflicts[x] = number of chosen elements whose distance to x is forbidden.
struct ConflictCounts {
    const ForbiddenSet& F;
    std::vector<std::int32_t> conflicts;
    std::vector<bool> chosen;

    explicit ConflictCounts(const ForbiddenSet& f)
        : F(f), conflicts(static_cast<std::size_t>(f.N()) + 1, 0), chosen(static_cast<std::size_t>(f.N()) + 1, false) {}

    void toggle(std::int64_t v, int delta) {
        chosen[static_cast<std::size_t>(v)] = delta > 0;
        for (std::int64_t x = 1; x <= F.N(); ++x) {
            if (F.forbidden(x - v)) conflicts[static_cast<std::size_t>(x)] += delta;
        }
    }
    bool free(std::int64_t x) const {
        return !chosen[static_cast<std::size_t>(x)] && conflicts[static_cast<std::size_t>(x)] == 0;
    }
};

/// Uniform index in [0, n) from a raw 64-bit stream; fixed across platforms.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) { return rng() % n; }

}  // namespace

SearchResult greedy_avoiding(const ForbiddenSet& F, GreedyStrategy strategy, std::uint64_t seed, int max_passes) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::int64_t N = F.N();
    std::vector<std::int64_t> order(static_cast<std::size_t>(N));
    for (std::int64_t i = 0; i < N; ++i) order[static_cast<std::size_t>(i)] = i + 1;

    std::mt19937_64 rng(seed);
    if (strategy == GreedyStrategy::random_local) {
        for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[bounded(rng, i)]);
    }

    ConflictCounts cc(F);
    std::vector<std::int64_t> chosen;
    std::uint64_t nodes = 0;
    for (const auto x : order) {
        ++nodes;
        if (cc.free(x)) {
            cc.toggle(x, +1);
            chosen.push_back(x);
        }
    }

    if (strategy == GreedyStrategy::random_local) {
        for (int pass = 0; pass < max_passes; ++pass) {
            bool improved = false;
            for (std::size_t idx = 0; idx < chosen.size() && !improved; ++idx) {
                const std::int64_t v = chosen[idx];
                // Elements blocked by v alone.
                std::vector<std::int64_t> cand;
                for (std::int64_t x = 1; x <= N; ++x) {
                    if (!cc.chosen[static_cast<std::size_t>(x)] && cc.conflicts[static_cast<std::size_t>(x)] == 1 &&
                        F.forbidden(x - v)) {
                        cand.push_back(x);
                    }
                }
                for (std::size_t i = 0; i < cand.size() && !improved; ++i) {
                    for (std::size_t j = i + 1; j < cand.size(); ++j) {
                        ++nodes;
                        if (F.forbidden(cand[j] - cand[i])) continue;
                        cc.toggle(v, -1);
                        cc.toggle(cand[i], +1);
                        cc.toggle(cand[j], +1);
                        chosen.erase(chosen.begin() + static_cast<std::ptrdiff_t>(idx));
                        chosen.push_back(cand[i]);
                        chosen.push_back(cand[j]);
                        improved = true;
                        break;
                    }
                }
            }
            // Anything freed up by the swap.
            for (std::int64_t x = 1; x <= N; ++x) {
                if (cc.free(x)) {
                    cc.toggle(x, +1);
                    chosen.push_back(x);
                    improved = true;
                }
            }
            if (!improved) break;
        }
    }

    SearchResult r;
    r.strategy = to_string(strategy);
    r.seed = seed;
    std::sort(chosen.begin(), chosen.end());
    r.best_set = std::move(chosen);
    r.nodes_explored = nodes;
    finish(r, F, t0);
    return r;
}

double growth_shape(std::int64_t N) {
    if (N < 3) throw DomainError("growth_shape: N must be >= 3");
    const double ln = std::log(static_cast<double>(N));
    return std::numbers::ln2 / 2.0 * ln / std::log(ln);
}

std::vector<GrowthRow> growth_table(std::span<const std::int64_t> Ns, std::int64_t d, std::uint64_t seed) {
    std::vector<GrowthRow> rows;
    for (const auto N : Ns) {
        const auto F = ForbiddenSet::build(N, d);
        const auto r = N <= kExactModeCap ? max_avoiding_exact(F)
                                          : greedy_avoiding(F, GreedyStrategy::random_local, seed);
        GrowthRow row;
        row.N = N;
        row.size = r.size;
        row.optimal = r.optimal;
        row.log_size = std::log(static_cast<double>(r.size));
        row.shape = N >= 3 ? growth_shape(N) : 0.0;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace primediff::avoider
