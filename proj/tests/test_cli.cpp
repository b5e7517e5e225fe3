#include <cmath>
#include <fstream>

#include "cli_run.hpp"
#include "doctest.h"
#include "json.hpp"
#include "oracles.hpp"

using nlohmann::json;

namespace {
const std::string kTs = "--timestamp 2026-01-01T00:00:00Z";

std::vector<json> jsonl(const std::string& text) {
    std::vector<json> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) out.push_back(json::parse(line));
    return out;
}
}  // namespace

TEST_CASE("psi and lambda") {
    auto r = cli::run("psi --x 10 --q 1 --a 0");
    CHECK(r.code == 0);
    CHECK(std::stod(r.out) == doctest::Approx(oracle::psi(10, 1, 0)).epsilon(1e-11));
    CHECK(r.out.rfind("7.832014", 0) == 0);
    r = cli::run("psi --x 0 --q 3 --a 1");
    CHECK(r.code == 0);
    CHECK(r.out == "0\n");
    r = cli::run("lambda --n 5 --d 2 --at 0");
    CHECK(r.code == 0);
    const double want = 2 * std::log(3.0) + std::log(5.0) + std::log(7.0) + std::log(11.0);
    CHECK(std::stod(r.out) == doctest::Approx(want).epsilon(1e-11));
    r = cli::run("lambda --n 9 --d 1 --at 1/2");
    CHECK(r.code == 0);
    CHECK(std::stod(r.out) == doctest::Approx(3.673129).epsilon(1e-6));
    r = cli::run("lambda --n 9 --d 1 --at 0.5");
    CHECK(std::stod(r.out) == doctest::Approx(3.673129).epsilon(1e-6));
}

TEST_CASE("sieve") {
    auto r = cli::run("sieve --n-max 10 --summary");
    CHECK(r.code == 0);
    CHECK(r.out.find("primes 4") != std::string::npos);
    r = cli::run("sieve --n-max 6");
    CHECK(r.out.find("6,0,2,1,2\n") != std::string::npos);
    CHECK(cli::run("sieve --n-max 0").code == 2);
}

TEST_CASE("usage errors exit 2") {
    CHECK(cli::run("").code == 2);
    CHECK(cli::run("psi --x 10").code == 2);
    CHECK(cli::run("extremal --n 10 --d 1 --mode magic").code == 2);
    CHECK(cli::run("bogus").code == 2);
    CHECK(cli::run("lambda --n 5 --d 2 --at zz").code == 2);
    CHECK(cli::run("--help").code == 0);
}

TEST_CASE("spectrum CSV") {
    const auto r = cli::run("spectrum --n 200 --d 1 --qp 4 --q 20 --grid 2048 " + kTs);
    REQUIRE(r.code == 0);
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    CHECK(line == "theta,a,q,class,actual,bound,ratio");
    int rows = 0;
    while (std::getline(in, line))
        if (line[0] != '#') ++rows;
    CHECK(rows == 2048);
    CHECK(r.out.find("# manifest {\"command\":\"spectrum\"") != std::string::npos);
    const auto again = cli::run("spectrum --n 200 --d 1 --qp 4 --q 20 --grid 2048 --workers 3 " + kTs);
    CHECK(again.out == r.out);
    CHECK(cli::run("spectrum --n 200 --d 1 --qp 4 --q 20 --grid 100").code == 3);
    CHECK(cli::run("spectrum --n 200 --d 4 --qp 4 --q 20 --grid 2048 --exceptional-modulus 3 "
                   "--exceptional-beta 0.9")
              .code == 3);
}

TEST_CASE("extremal JSON") {
    auto r = cli::run("extremal --n 10 --d 1 --mode exact " + kTs);
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j["optimal"] == true);
    CHECK(j["size"] == oracle::max_avoiding(10, 1));
    CHECK(j["manifest"]["command"] == "extremal");
    const auto g1 = cli::run("extremal --n 300 --d 1 --mode greedy --seed 7 " + kTs);
    const auto g2 = cli::run("extremal --n 300 --d 1 --mode greedy --seed 7 " + kTs);
    CHECK(g1.out == g2.out);
    const auto l1 = cli::run("extremal --n 300 --d 2 --mode local --seed 7 " + kTs);
    const auto l2 = cli::run("--seed 7 extremal --n 300 --d 2 --mode local " + kTs);
    CHECK(l1.code == 0);
    CHECK(l1.out == l2.out);
    CHECK(cli::run("extremal --n 200 --d 1 --mode exact").code == 2);
}

TEST_CASE("iterate") {
    {
        std::ofstream f("cli_full.txt");
        for (int i = 1; i <= 100; ++i) f << i << '\n';
    }
    auto r = cli::run("iterate --input cli_full.txt --d 1 " + kTs);
    REQUIRE(r.code == 0);
    auto lines = jsonl(r.out);
    REQUIRE(lines.size() == 1);
    CHECK(lines[0]["outcome"] == "StructureFound");
    CHECK(lines[0]["witness"]["p"] == 2);

    r = cli::run("iterate --greedy 3000 --d 1 " + kTs);
    REQUIRE(r.code == 0);
    lines = jsonl(r.out);
    REQUIRE(!lines.empty());
    const auto terminal = lines.front()["terminal"].get<std::string>();
    CHECK((terminal == "SmallN" || terminal == "LargeDOrSmallAlpha" || terminal == "SmallAlpha" ||
           terminal == "Budget"));
    const auto& params = lines.front()["manifest"]["parameters"];
    CHECK(params["c"] == "0.05");
    CHECK(params["max_steps"] == "16");

    {
        std::ofstream f("cli_cfg.txt");
        f << "max_steps = 3\n";
    }
    r = cli::run("iterate --greedy 500 --d 1 --config cli_cfg.txt " + kTs);
    CHECK(r.code == 0);
    CHECK(jsonl(r.out).front()["manifest"]["parameters"]["max_steps"] == "3");
    {
        std::ofstream f("cli_bad.txt");
        f << "nonsense = 3\n";
    }
    CHECK(cli::run("iterate --greedy 500 --d 1 --config cli_bad.txt").code == 2);
    CHECK(cli::run("iterate --d 1").code == 2);
    CHECK(cli::run("iterate --input does_not_exist.txt --d 1").code == 3);
}
