#include "primediff/driver.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "primediff/avoider.hpp"
#include "primediff/errors.hpp"
#include "primediff/farey.hpp"
#include "primediff/primality.hpp"

namespace primediff::driver {
namespace {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(std::string_view key, std::string_view v) {
    double out = 0.0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc{} || res.ptr != v.data() + v.size()) {
        throw DomainError("config: bad number for '" + std::string(key) + "': '" + std::string(v) + "'");
    }
    return out;
}

std::int64_t parse_int(std::string_view key, std::string_view v) {
    std::int64_t out = 0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc{} || res.ptr != v.data() + v.size()) {
        throw DomainError("config: bad integer for '" + std::string(key) + "': '" + std::string(v) + "'");
    }
    return out;
}

}  // namespace

std::map<std::string, double> IterationConfig::default_tolerances() {
    // c_1..c_10, c_E and C are the implicit constants of the asymptotic
    // argument; they are carried for the record and never read as numbers.
    std::map<std::string, double> t;
    for (const char* name : {"c_1", "c_2", "c_3", "c_4", "c_5", "c_6", "c_8", "c_9", "c_10", "c_E", "C"}) t[name] = 1.0;
    t["certify_energy_rel"] = 0.25;
    return t;
}

void IterationConfig::validate() const {
    if (!(c > 0.0 && c < 1.0)) throw DomainError("config: need 0 < c < 1");
    if (!(c_prime > 0.0) || !(c_double_prime > 0.0)) throw DomainError("config: c' and c'' must be positive");
    if (!(D1 >= D0 && D0 >= 2)) throw DomainError("config: need D1 >= D0 >= 2");
    if (grid_factor < 8) throw DomainError("config: grid_factor must be >= 8");
    if (!(gain_threshold > 0.0)) throw DomainError("config: gain_threshold must be positive");
    if (max_steps < 1 || q_cap < 1 || n_floor < 1) throw DomainError("config: max_steps, q_cap, n_floor must be >= 1");
    if (!(alpha_floor >= 0.0 && alpha_floor < 1.0)) throw DomainError("config: alpha_floor must lie in [0, 1)");
    if (!(c_len > 0.0) || !(c_slack >= 0.0)) throw DomainError("config: c_len must be positive, c_slack >= 0");
    for (const auto& [name, value] : tolerances) {
        if (!(value > 0.0)) throw DomainError("config: tolerance '" + name + "' must be positive");
    }
}

IterationConfig IterationConfig::parse(std::string_view text) {
    IterationConfig cfg;
    std::optional<std::int64_t> ex_modulus;
    std::optional<double> ex_beta;
    std::size_t pos = 0;
    int line_no = 0;
    while (pos <= text.size()) {
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        std::string_view line = text.substr(pos, nl - pos);
        pos = nl + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw DomainError("config line " + std::to_string(line_no) + ": expected key=value");
        }
        const auto key = trim(line.substr(0, eq));
        const auto val = trim(line.substr(eq + 1));

        if (key == "c") cfg.c = parse_double(key, val);
        else if (key == "c_prime") cfg.c_prime = parse_double(key, val);
        else if (key == "c_double_prime") cfg.c_double_prime = parse_double(key, val);
        else if (key == "eta") cfg.eta = parse_double(key, val);
        else if (key == "D0") cfg.D0 = parse_int(key, val);
        else if (key == "D1") cfg.D1 = parse_int(key, val);
        else if (key == "grid_factor") cfg.grid_factor = parse_int(key, val);
        else if (key == "gain_threshold") cfg.gain_threshold = parse_double(key, val);
        else if (key == "max_steps") cfg.max_steps = parse_int(key, val);
        else if (key == "q_cap") cfg.q_cap = parse_int(key, val);
        else if (key == "n_floor") cfg.n_floor = parse_int(key, val);
        else if (key == "alpha_floor") cfg.alpha_floor = parse_double(key, val);
        else if (key == "d_ceiling_exponent") cfg.d_ceiling_exponent = parse_double(key, val);
        else if (key == "c_len") cfg.c_len = parse_double(key, val);
        else if (key == "c_slack") cfg.c_slack = parse_double(key, val);
        else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_int(key, val));
        else if (key == "exceptional_modulus") ex_modulus = parse_int(key, val);
        else if (key == "exceptional_beta") ex_beta = parse_double(key, val);
        else if (key.starts_with("tol.")) {
            const std::string name(key.substr(4));
            if (!cfg.tolerances.contains(name)) throw DomainError("config: unknown tolerance '" + name + "'");
            cfg.tolerances[name] = parse_double(key, val);
        } else {
            throw DomainError("config: unknown key '" + std::string(key) + "'");
        }
    }
    if (ex_modulus.has_value() != ex_beta.has_value()) {
        throw DomainError("config: exceptional_modulus and exceptional_beta go together");
    }
    if (ex_modulus) cfg.exceptional = arith::ExceptionalDatum::make(*ex_modulus, *ex_beta);
    cfg.validate();
    return cfg;
}

std::vector<std::pair<std::string, std::string>> IterationConfig::effective_values() const {
    std::vector<std::pair<std::string, std::string>> kv{
        {"c", format_double(c)},
        {"c_prime", format_double(c_prime)},
        {"c_double_prime", format_double(c_double_prime)},
        {"eta", format_double(eta)},
        {"D0", std::to_string(D0)},
        {"D1", std::to_string(D1)},
        {"grid_factor", std::to_string(grid_factor)},
        {"gain_threshold", format_double(gain_threshold)},
        {"max_steps", std::to_string(max_steps)},
        {"q_cap", std::to_string(q_cap)},
        {"n_floor", std::to_string(n_floor)},
        {"alpha_floor", format_double(alpha_floor)},
        {"d_ceiling_exponent", format_double(d_ceiling_exponent)},
        {"c_len", format_double(c_len)},
        {"c_slack", format_double(c_slack)},
        {"seed", std::to_string(seed)},
    };
    if (exceptional) {
        kv.emplace_back("exceptional_modulus", std::to_string(exceptional->modulus));
        kv.emplace_back("exceptional_beta", format_double(exceptional->beta));
    }
    for (const auto& [name, value] : tolerances) kv.emplace_back("tol." + name, format_double(value));
    return kv;
}

ArcParameters arc_parameters(std::int64_t N, std::int64_t d, double alpha, const IterationConfig& config) {
    ArcParameters p;
    p.N_prime = static_cast<std::int64_t>(std::floor(config.c * alpha * static_cast<double>(N)));
    const double a2 = std::max(alpha, 1e-300) * std::max(alpha, 1e-300);
    const double logN = std::log(std::max<double>(static_cast<double>(N), 2.0));
    const double dd = static_cast<double>(d);
    const double q_prime = dd * dd * dd * dd * std::pow(logN, 8) / (config.c_prime * config.c_prime * a2);
    const double q_double = 1.0 / (config.c_double_prime * config.c_double_prime * a2);
    const auto clamp_to = [](double v, std::int64_t hi) {
        return v >= static_cast<double>(hi) ? hi : std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(v)));
    };
    p.Q_prime = clamp_to(q_prime, std::min(config.q_cap, std::max<std::int64_t>(N, 1)));
    p.Q_double_prime = clamp_to(q_double, p.Q_prime);
    p.Q = std::max(p.Q_prime, N / p.Q_prime);
    return p;
}

std::optional<InnerProductStats> inner_product_stats(const increment::DensitySet& A, std::int64_t d,
                                                     const IterationConfig& config,
                                                     const arith::ArithTables& tables) {
    const std::int64_t N = A.N();
    const double alpha = A.alpha();
    const auto Np = static_cast<std::int64_t>(std::floor(config.c * alpha * static_cast<double>(N)));
    if (Np < 1) return std::nullopt;
    if (d > (tables.n_max() - 1) / Np) throw DomainError("inner_product_stats: dN'+1 exceeds the tables");

    const auto F = avoider::ForbiddenSet::build(std::max<std::int64_t>(N, 2), d);
    InnerProductStats s;
    s.N_prime = Np;
    s.avoiding = avoider::is_avoiding(A.elements(), F);

    // Prefix counts of A for the window terms.
    std::vector<std::int64_t> prefix(static_cast<std::size_t>(N) + 1, 0);
    for (std::int64_t x = 1; x <= N; ++x) prefix[static_cast<std::size_t>(x)] = prefix[static_cast<std::size_t>(x - 1)] + (A.contains(x) ? 1 : 0);
    const auto count_upto = [&](std::int64_t x) {
        return x <= 0 ? 0 : prefix[static_cast<std::size_t>(std::min(x, N))];
    };

    double proper_mass = 0.0;
    for (std::int64_t x = 1; x <= Np; ++x) {
        const double lam = tables.mangoldt(d * x + 1);
        if (lam == 0.0) continue;
        s.lambda0 += lam;
        const bool proper_power = !tables.is_prime(d * x + 1);
        if (proper_power) proper_mass += lam;

        std::int64_t r = 0;  // #{(a, b) in A^2 : a - b = x}
        for (const auto b : A.elements()) {
            if (b + x > N) break;
            r += A.contains(b + x) ? 1 : 0;
        }
        if (s.avoiding && r > 0 && !proper_power) {
            throw std::logic_error("inner_product_stats: avoiding set has difference " + std::to_string(x) +
                                   " with d x + 1 prime");
        }
        s.aa += static_cast<double>(r) * lam;
        s.ia += static_cast<double>(count_upto(N - x)) * lam;       // b <= N - x
        s.ai += static_cast<double>(A.size() - count_upto(x)) * lam;  // a >= x + 1
        s.ii += static_cast<double>(std::max<std::int64_t>(N - x, 0)) * lam;
    }
    s.proper_power_bound = static_cast<double>(A.size()) * proper_mass;
    if (s.avoiding && s.aa > s.proper_power_bound * (1 + 1e-12)) {
        throw std::logic_error("inner_product_stats: proper prime power bound violated");
    }
    const double combined = s.aa - alpha * s.ia - alpha * s.ai + alpha * alpha * s.ii;
    const double scale = alpha * alpha * static_cast<double>(N) * s.lambda0;
    s.delta = scale > 0.0 ? combined / scale : 0.0;
    return s;
}

OutcomeTag tag_of(const Outcome& o) {
    switch (o.index()) {
        case 0: return OutcomeTag::density_increment;
        case 1: return OutcomeTag::structure_found;
        case 2: return OutcomeTag::small_n;
        case 3: return OutcomeTag::large_d_or_small_alpha;
        default: return OutcomeTag::small_alpha;
    }
}

std::string to_string(OutcomeTag tag) {
    switch (tag) {
        case OutcomeTag::density_increment: return "DensityIncrement";
        case OutcomeTag::structure_found: return "StructureFound";
        case OutcomeTag::small_n: return "SmallN";
        case OutcomeTag::large_d_or_small_alpha: return "LargeDOrSmallAlpha";
        case OutcomeTag::small_alpha: return "SmallAlpha";
        case OutcomeTag::budget: return "Budget";
    }
    return "?";
}

namespace {

/// Smallest forbidden difference present in A, with its smallest lower endpoint.
std::optional<StructureFound> find_structure(const increment::DensitySet& A, std::int64_t d) {
    const std::int64_t N = A.N();
    if (N < 2 || A.size() < 2) return std::nullopt;
    const auto F = avoider::ForbiddenSet::build(N, d);
    for (std::int64_t x = 1; x < N; ++x) {
        if (!F.forbidden(x)) continue;
        for (const auto b : A.elements()) {
            if (b + x > N) break;
            if (A.contains(b + x)) {
                return StructureFound{x, static_cast<std::uint64_t>(d) * static_cast<std::uint64_t>(x) + 1, b + x, b};
            }
        }
    }
    return std::nullopt;
}

double d_ceiling(std::int64_t N, const IterationConfig& config) {
    return std::pow(static_cast<double>(N), config.d_ceiling_exponent);
}

}  // namespace

StepRecord iterate_once(const State& state, const IterationConfig& config, const arith::ArithTables& tables) {
    const auto& A = state.A;
    const std::int64_t N = A.N();
    const double alpha = A.alpha();
    StepRecord rec;
    rec.state = state;
    rec.arcs = arc_parameters(N, state.d, alpha, config);
    if (config.exceptional && state.d % config.exceptional->modulus != 0) {
        throw PreconditionError("iterate_once: exceptional modulus must divide d");
    }

    if (N < config.n_floor) {
        rec.outcome = SmallN{};
        return rec;
    }
    if (alpha < config.alpha_floor) {
        rec.outcome = SmallAlpha{};
        return rec;
    }
    if (auto s = find_structure(A, state.d)) {
        rec.outcome = *s;
        return rec;
    }
    if (rec.arcs.N_prime < 1) {
        rec.outcome = SmallN{};
        return rec;
    }
    if (state.d > 1 && static_cast<double>(state.d) > d_ceiling(N, config)) {
        rec.outcome = LargeDOrSmallAlpha{"d exceeds N^" + format_double(config.d_ceiling_exponent)};
        return rec;
    }

    if (state.d <= (tables.n_max() - 1) / rec.arcs.N_prime) {
        rec.inner = inner_product_stats(A, state.d, config, tables);
    }

    const std::int64_t M = spectral::default_grid_size(N, config.grid_factor);
    const auto table = increment::energy_table(A, rec.arcs.Q_prime, rec.arcs.Q, M, config.workers);

    std::vector<const increment::EnergyStats*> order;
    for (const auto& row : table.rows) order.push_back(&row);
    std::stable_sort(order.begin(), order.end(),
                     [](const auto* x, const auto* y) { return x->E_star_q > y->E_star_q; });
    for (std::size_t i = 0; i < std::min<std::size_t>(5, order.size()); ++i) {
        rec.energy_top.emplace_back(order[i]->q, order[i]->E_star_q);
    }

    // Among q <= Q'' whose extraction meets the guarantee and the gain
    // threshold, keep the largest excess |A cap P| N - |A| L (alpha-scaled
    // surplus); ties go to the earlier entry of the energy order.
    const increment::ExtractionParams params{config.c_len, 0.0};
    std::optional<increment::IncrementOutcome> best;
    std::int64_t best_q = 0;
    long double best_excess = 0;
    for (const auto* row : order) {
        if (row->q > rec.arcs.Q_double_prime) continue;
        const auto got = increment::extract_progression(A, row->q, row->eta, row->E_q_eta, params);
        if (!got || !got->met_guarantee) continue;
        const long double have = static_cast<long double>(got->intersection_count) * N;
        const long double base = static_cast<long double>(A.size()) * got->progression.length;
        if (have < base * (1.0L + config.gain_threshold)) continue;
        if (!best || have - base > best_excess) {
            best = got;
            best_q = row->q;
            best_excess = have - base;
        }
    }
    if (best) {
        if (state.d > std::numeric_limits<std::int64_t>::max() / best_q) {
            rec.outcome = LargeDOrSmallAlpha{"modulus overflow"};
            return rec;
        }
        rec.outcome = DensityIncrement{best_q, best->progression, best->intersection_count, best->energy,
                                       increment::rescale(A, best->progression)};
        return rec;
    }
    rec.outcome = LargeDOrSmallAlpha{"no progression met the energy guarantee"};
    return rec;
}

Trace run(const increment::DensitySet& A, std::int64_t d, const IterationConfig& config,
          const arith::ArithTables& tables) {
    config.validate();
    Trace trace;
    trace.config = config;
    State state{A, d};
    for (std::int64_t step = 0; step < config.max_steps; ++step) {
        StepRecord rec = iterate_once(state, config, tables);
        rec.step = step + 1;
        const auto tag = tag_of(rec.outcome);
        if (tag != OutcomeTag::density_increment) {
            trace.terminal = tag;
            trace.steps.push_back(std::move(rec));
            return trace;
        }
        const auto& inc = std::get<DensityIncrement>(rec.outcome);
        if (inc.progression.count_in(state.A) != inc.intersection_count) {
            throw std::logic_error("run: recount mismatch at step " + std::to_string(step));
        }
        State next{inc.next, state.d * inc.q};
        trace.steps.push_back(std::move(rec));
        state = std::move(next);
    }
    trace.terminal = OutcomeTag::budget;
    return trace;
}

bool CertificationReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass; });
}

void CertificationReport::require() const {
    for (const auto& c : checks) {
        if (!c.pass) throw CertificationError(static_cast<std::size_t>(c.step), c.message);
    }
}

namespace {

std::string check_step(const Trace& trace, std::size_t i, const arith::ArithTables& tables) {
    const auto& cfg = trace.config;
    const auto& rec = trace.steps[i];
    const auto& A = rec.state.A;
    const std::int64_t N = A.N();
    const std::int64_t d = rec.state.d;

    if (rec.step != static_cast<std::int64_t>(i) + 1) return "step index out of sequence";
    if (static_cast<std::int64_t>(i) >= cfg.max_steps) return "more steps than max_steps";
    const auto tag = tag_of(rec.outcome);
    if (tag != OutcomeTag::density_increment && i + 1 != trace.steps.size()) return "terminal outcome before the end";

    if (const auto* s = std::get_if<StructureFound>(&rec.outcome)) {
        if (!A.contains(s->a) || !A.contains(s->b)) return "witness endpoint not in A";
        if (s->a - s->b != s->x || s->x < 1) return "witness difference mismatch";
        if (static_cast<std::uint64_t>(d) * static_cast<std::uint64_t>(s->x) + 1 != s->p) return "witness p != d x + 1";
        if (!is_prime_u64(s->p)) return "witness p is not prime";
        return {};
    }
    if (std::holds_alternative<SmallN>(rec.outcome)) {
        if (N >= cfg.n_floor && rec.arcs.N_prime >= 1) return "SmallN claimed above the floor";
        return {};
    }
    if (std::holds_alternative<SmallAlpha>(rec.outcome)) {
        if (A.alpha() >= cfg.alpha_floor) return "SmallAlpha claimed above the floor";
        return {};
    }

    // Remaining outcomes run past the structure scan, so A must avoid.
    if (N >= 2 && !avoider::is_avoiding(A.elements(), avoider::ForbiddenSet::build(N, d))) {
        return "A has a forbidden difference but no StructureFound was reported";
    }

    // Energy spot check on the coarsest admissible grid.
    if (!rec.energy_top.empty()) {
        const auto M = spectral::default_grid_size(N, 8);
        const auto table = increment::energy_table(A, rec.arcs.Q_prime, rec.arcs.Q, M);
        const double tol = cfg.tolerances.at("certify_energy_rel");
        for (const auto& [q, E] : rec.energy_top) {
            const double again = table.rows[static_cast<std::size_t>(q - 1)].E_star_q;
            if (std::abs(again - E) > tol * std::max(E, 0.01 * table.total_energy) + 1e-12) {
                return "energy for q = " + std::to_string(q) + " does not reproduce";
            }
        }
    }

    if (const auto* inc = std::get_if<DensityIncrement>(&rec.outcome)) {
        const auto& P = inc->progression;
        if (P.step != inc->q) return "progression step differs from q";
        if (P.first < 1 || P.last() > N) return "progression leaves [1, N]";
        if (P.count_in(A) != inc->intersection_count) return "intersection count does not recount";
        const long double count = inc->intersection_count;
        if (count * N < static_cast<long double>(A.size()) * P.length * (1.0L + cfg.gain_threshold)) {
            return "density gain below gain_threshold";
        }
        if (4.0L * count * N < static_cast<long double>(A.size()) * P.length * (4.0L + inc->energy)) {
            return "density below alpha (1 + E/4)";
        }
        if (!(increment::rescale(A, P) == inc->next)) return "rescaled set does not match";
        if (i + 1 < trace.steps.size()) {
            const auto& nxt = trace.steps[i + 1].state;
            if (nxt.d != d * inc->q) return "modulus chain broken";
            if (!(nxt.A == inc->next)) return "next state is not the rescaled set";
            if (!(nxt.A.alpha() > A.alpha())) return "alpha did not increase";
        }
    }
    (void)tables;
    return {};
}

}  // namespace

CertificationReport certify(const Trace& trace, const arith::ArithTables& tables) {
    CertificationReport report;
    for (std::size_t i = 0; i < trace.steps.size(); ++i) {
        StepCheck c;
        c.step = static_cast<std::int64_t>(i) + 1;
        try {
            c.message = check_step(trace, i, tables);
        } catch (const std::exception& e) {
            c.message = std::string("exception: ") + e.what();
        }
        c.pass = c.message.empty();
        report.checks.push_back(std::move(c));
    }
    if (!trace.steps.empty() && tag_of(trace.steps.back().outcome) != trace.terminal &&
        !(trace.terminal == OutcomeTag::budget &&
          tag_of(trace.steps.back().outcome) == OutcomeTag::density_increment)) {
        report.checks.push_back({static_cast<std::int64_t>(trace.steps.size()), false, "terminal tag mismatch"});
    }
    return report;
}

}  // namespace primediff::driver
