// primediff: command-line front end.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "primediff/arith.hpp"
#include "primediff/avoider.hpp"
#include "primediff/driver.hpp"
#include "primediff/errors.hpp"
#include "primediff/lambda.hpp"
#include "primediff/parallel.hpp"
#include "primediff/report.hpp"

namespace pd = primediff;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitResource = 3;
constexpr int kExitCertification = 4;

struct Globals {
    unsigned workers = pd::default_workers();
    std::uint64_t seed = 0;
    std::string timestamp;
    std::string out;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw pd::ResourceError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Writes to --out when given, stdout otherwise.
template <class Fn>
void emit(const Globals& g, Fn&& write) {
    if (g.out.empty()) {
        write(std::cout);
        std::cout.flush();
        return;
    }
    std::ofstream f(g.out, std::ios::binary);
    if (!f) throw pd::ResourceError("cannot write '" + g.out + "'");
    write(f);
}

pd::report::RunManifest manifest(const Globals& g, std::string command,
                                 std::vector<std::pair<std::string, std::string>> params) {
    pd::report::RunManifest m;
    m.command = std::move(command);
    m.parameters = std::move(params);
    m.seed = g.seed;
    m.timestamp = g.timestamp.empty() ? pd::report::utc_timestamp() : g.timestamp;
    return m;
}

pd::arith::ArithTables tables_for(std::int64_t bound) {
    return pd::arith::build_tables(std::max<std::int64_t>(bound, 2));
}

std::int64_t checked_bound(std::int64_t d, std::int64_t N) {
    if (d < 1 || N < 1) throw pd::DomainError("n and d must be >= 1");
    if (d > (pd::arith::ArithTables::kDefaultCapacity - 1) / N) {
        throw pd::ResourceError("d N + 1 exceeds the sieve capacity");
    }
    return d * N + 1;
}

using pd::report::format_number;

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"primediff: shifted-prime difference sets workbench"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--workers", g.workers, "worker threads (output does not depend on it)")->check(CLI::PositiveNumber);
    app.add_option("--seed", g.seed, "64-bit seed for every random choice");
    app.add_option("--timestamp", g.timestamp, "manifest timestamp (default: now, UTC)");
    app.add_option("--out", g.out, "output file (default: stdout)");

    // sieve
    auto* sieve = app.add_subcommand("sieve", "arithmetic tables up to n-max");
    std::int64_t n_max = 0;
    bool summary = false;
    sieve->add_option("--n-max", n_max)->required();
    sieve->add_flag("--summary", summary, "only prime count and psi(n-max)");

    // psi
    auto* psi = app.add_subcommand("psi", "psi(x; q, a)");
    double x = 0;
    std::int64_t q = 1, a = 0;
    psi->add_option("--x", x)->required();
    psi->add_option("--q", q)->required();
    psi->add_option("--a", a)->required();

    // lambda
    auto* lam = app.add_subcommand("lambda", "Fourier transform of Lambda_{N,d}");
    std::int64_t N = 0, d = 1;
    std::string at = "0";
    lam->add_option("--n", N)->required();
    lam->add_option("--d", d)->required();
    lam->add_option("--at", at, "0, a/q, or a real theta");

    // spectrum
    auto* spec = app.add_subcommand("spectrum", "per-frequency bound report as CSV");
    std::int64_t Qp = 1, Q = 1, grid = 0;
    std::optional<std::int64_t> ex_mod;
    std::optional<double> ex_beta;
    spec->add_option("--n", N)->required();
    spec->add_option("--d", d)->required();
    spec->add_option("--qp", Qp)->required();
    spec->add_option("--q", Q)->required();
    spec->add_option("--grid", grid)->required();
    spec->add_option("--exceptional-modulus", ex_mod);
    spec->add_option("--exceptional-beta", ex_beta);

    // extremal
    auto* ext = app.add_subcommand("extremal", "large subsets of [N] avoiding (p-1)/d");
    std::string mode = "exact";
    std::uint64_t budget = 0;
    ext->add_option("--n", N)->required();
    ext->add_option("--d", d)->required();
    ext->add_option("--mode", mode, "exact | greedy | local")
        ->check(CLI::IsMember({"exact", "greedy", "local"}));
    ext->add_option("--budget", budget, "node budget for exact mode (0 = none)");

    // iterate
    auto* it = app.add_subcommand("iterate", "density-increment loop with certification");
    std::string input, config_path;
    std::int64_t greedy_n = 0;
    it->add_option("--input", input, "set file, one integer per line");
    it->add_option("--greedy", greedy_n, "use a first-fit avoiding subset of [N]");
    it->add_option("--n", N, "ambient N for --input (default: largest element)");
    it->add_option("--d", d);
    it->add_option("--config", config_path, "key=value config file");

    for (auto* sub : {sieve, psi, lam, spec, ext, it}) {
        sub->add_option("--workers", g.workers)->check(CLI::PositiveNumber);
        sub->add_option("--seed", g.seed);
        sub->add_option("--timestamp", g.timestamp);
        sub->add_option("--out", g.out);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    try {
        if (*sieve) {
            const auto t = pd::arith::build_tables(n_max);
            emit(g, [&](std::ostream& out) {
                if (summary) {
                    out << "n_max " << n_max << "\nprimes " << t.primes().size() << "\npsi "
                        << format_number(pd::arith::psi_upto(n_max, 1, 0, t)) << '\n';
                    return;
                }
                out << "n,lambda,phi,mu,spf\n";
                for (std::int64_t n = 1; n <= n_max; ++n) {
                    out << n << ',' << format_number(t.mangoldt(n)) << ',' << t.phi(n) << ',' << t.mobius(n) << ','
                        << t.spf(n) << '\n';
                }
            });
        } else if (*psi) {
            if (q < 1) throw pd::DomainError("q must be >= 1");
            const auto t = tables_for(static_cast<std::int64_t>(std::max(x, 1.0)));
            emit(g, [&](std::ostream& out) { out << format_number(pd::arith::psi(x, q, a, t)) << '\n'; });
        } else if (*lam) {
            const auto t = tables_for(checked_bound(d, N));
            std::string line;
            if (at == "0") {
                line = format_number(pd::lambda::lambda_hat_zero(N, d, t));
            } else if (const auto slash = at.find('/'); slash != std::string::npos) {
                const auto aa = std::stoll(at.substr(0, slash));
                const auto qq = std::stoll(at.substr(slash + 1));
                const auto v = pd::lambda::lambda_hat_rational(N, d, aa, qq, t);
                line = format_number(v.real()) + ' ' + format_number(v.imag());
            } else {
                std::size_t used = 0;
                const double theta = std::stod(at, &used);
                if (used != at.size()) throw pd::DomainError("--at: expected 0, a/q or a real number");
                const auto w = pd::lambda::lambda_weight(N, d, t);
                const auto v = pd::spectral::transform_at(w.signal, theta);
                line = format_number(v.real()) + ' ' + format_number(v.imag());
            }
            emit(g, [&](std::ostream& out) { out << line << '\n'; });
        } else if (*spec) {
            if (grid < N) {
                std::cerr << "primediff: grid " << grid << " is smaller than N = " << N << '\n';
                return kExitResource;
            }
            if (ex_mod.has_value() != ex_beta.has_value()) {
                throw pd::DomainError("--exceptional-modulus and --exceptional-beta go together");
            }
            pd::lambda::SpectrumRequest req{N, d, Qp, Q, grid, std::nullopt, g.workers};
            std::vector<std::pair<std::string, std::string>> params{
                {"n", std::to_string(N)}, {"d", std::to_string(d)}, {"qp", std::to_string(Qp)},
                {"q", std::to_string(Q)}, {"grid", std::to_string(grid)}};
            if (ex_mod) {
                req.exceptional = pd::arith::ExceptionalDatum::make(*ex_mod, *ex_beta);
                params.emplace_back("exceptional_modulus", std::to_string(*ex_mod));
                params.emplace_back("exceptional_beta", format_number(*ex_beta));
            }
            const auto t = tables_for(checked_bound(d, N));
            const auto rows = pd::lambda::spectrum_report(req, t);
            const auto m = manifest(g, "spectrum", std::move(params));
            emit(g, [&](std::ostream& out) { pd::report::write_spectrum_csv(out, rows, m); });
        } else if (*ext) {
            const auto F = pd::avoider::ForbiddenSet::build(N, d);
            pd::avoider::SearchResult r;
            if (mode == "exact") {
                r = pd::avoider::max_avoiding_exact(F, budget);
            } else {
                const auto strategy =
                    mode == "greedy" ? pd::avoider::GreedyStrategy::first_fit : pd::avoider::GreedyStrategy::random_local;
                r = pd::avoider::greedy_avoiding(F, strategy, g.seed);
            }
            const auto m = manifest(g, "extremal",
                                    {{"n", std::to_string(N)},
                                     {"d", std::to_string(d)},
                                     {"mode", mode},
                                     {"budget", std::to_string(budget)}});
            const auto text = pd::report::extremal_json(N, d, r, m);
            emit(g, [&](std::ostream& out) { out << text; });
        } else if (*it) {
            if (input.empty() == (greedy_n == 0)) throw pd::DomainError("give exactly one of --input and --greedy");
            pd::driver::IterationConfig cfg;
            if (!config_path.empty()) cfg = pd::driver::IterationConfig::parse(read_file(config_path));
            cfg.seed = g.seed;
            cfg.workers = g.workers;

            pd::increment::DensitySet A;
            std::vector<std::pair<std::string, std::string>> params;
            if (!input.empty()) {
                auto elems = pd::report::parse_set_file(read_file(input));
                std::int64_t n = N;
                for (const auto e : elems) n = std::max(n, e);
                A = pd::increment::DensitySet::make(n, std::move(elems));
                params.emplace_back("input", input);
            } else {
                const auto F = pd::avoider::ForbiddenSet::build(greedy_n, d);
                auto r = pd::avoider::greedy_avoiding(F, pd::avoider::GreedyStrategy::first_fit, g.seed);
                A = pd::increment::DensitySet::make(greedy_n, std::move(r.best_set));
                params.emplace_back("greedy", std::to_string(greedy_n));
            }
            params.emplace_back("n", std::to_string(A.N()));
            params.emplace_back("d", std::to_string(d));
            for (auto& kv : cfg.effective_values()) params.push_back(std::move(kv));

            const auto t = tables_for(checked_bound(d, A.N()));
            const auto trace = pd::driver::run(A, d, cfg, t);
            const auto m = manifest(g, "iterate", std::move(params));
            emit(g, [&](std::ostream& out) { pd::report::write_trace_jsonl(out, trace, m); });
            pd::driver::certify(trace, t).require();
        }
    } catch (const pd::CertificationError& e) {
        std::cerr << "primediff: certification failed at " << e.what() << '\n';
        return kExitCertification;
    } catch (const pd::ResourceError& e) {
        std::cerr << "primediff: " << e.what() << '\n';
        return kExitResource;
    } catch (const pd::PreconditionError& e) {
        std::cerr << "primediff: " << e.what() << '\n';
        return kExitResource;
    } catch (const pd::DomainError& e) {
        std::cerr << "primediff: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "primediff: bad number: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::out_of_range& e) {
        std::cerr << "primediff: number out of range: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "primediff: internal error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
