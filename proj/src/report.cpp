#include "primediff/report.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <ostream>

#include "json.hpp"
#include "primediff/errors.hpp"

namespace primediff::report {

using json = nlohmann::ordered_json;

namespace {

json manifest_object(const RunManifest& m) {
    json params = json::object();
    for (const auto& [k, v] : m.parameters) params[k] = v;
    return json{{"command", m.command},
                {"parameters", params},
                {"seed", m.seed},
                {"version", m.version},
                {"timestamp", m.timestamp}};
}

std::string_view class_name(spectral::ArcClass c) {
    return c == spectral::ArcClass::major ? "major" : "minor";
}

}  // namespace

std::string RunManifest::to_json() const { return manifest_object(*this).dump(); }

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void write_spectrum_csv(std::ostream& out, const std::vector<lambda::BoundReport>& rows,
                        const RunManifest& manifest) {
    out << "theta,a,q,class,actual,bound,ratio\n";
    for (const auto& r : rows) {
        out << format_number(r.theta) << ',' << r.a << ',' << r.q << ',' << class_name(r.arc_class) << ','
            << format_number(r.actual) << ',' << format_number(r.bound) << ',' << format_number(r.ratio) << '\n';
    }
    out << "# manifest " << manifest.to_json() << '\n';
}

std::string extremal_json(std::int64_t N, std::int64_t d, const avoider::SearchResult& result,
                          const RunManifest& manifest) {
    json j{{"n", N},
           {"d", d},
           {"size", result.size},
           {"optimal", result.optimal},
           {"set", result.best_set},
           {"seed", result.seed},
           {"strategy", result.strategy},
           {"manifest", manifest_object(manifest)}};
    return j.dump(2) + "\n";
}

void write_trace_jsonl(std::ostream& out, const driver::Trace& trace, const RunManifest& manifest) {
    bool first = true;
    for (const auto& rec : trace.steps) {
        json line{{"step", rec.step},
                  {"n", rec.state.A.N()},
                  {"d", rec.state.d},
                  {"alpha", rec.state.A.alpha()},
                  {"outcome", driver::to_string(driver::tag_of(rec.outcome))},
                  {"q", nullptr}};
        if (const auto* inc = std::get_if<driver::DensityIncrement>(&rec.outcome)) {
            line["q"] = inc->q;
            line["progression"] = {{"first", inc->progression.first},
                                   {"step", inc->progression.step},
                                   {"length", inc->progression.length}};
            line["intersection"] = inc->intersection_count;
        }
        if (const auto* s = std::get_if<driver::StructureFound>(&rec.outcome)) {
            line["witness"] = {{"x", s->x}, {"p", s->p}, {"a", s->a}, {"b", s->b}};
        }
        if (const auto* l = std::get_if<driver::LargeDOrSmallAlpha>(&rec.outcome)) line["reason"] = l->reason;
        json top = json::array();
        for (const auto& [q, E] : rec.energy_top) top.push_back(json::array({q, E}));
        line["energy_top"] = std::move(top);
        if (first) {
            line["terminal"] = driver::to_string(trace.terminal);
            line["manifest"] = manifest_object(manifest);
            first = false;
        }
        out << line.dump() << '\n';
    }
}

std::vector<std::int64_t> parse_set_file(std::string_view text) {
    std::vector<std::int64_t> out;
    std::size_t pos = 0;
    int line_no = 0;
    while (pos < text.size()) {
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        auto line = text.substr(pos, nl - pos);
        pos = nl + 1;
        ++line_no;
        if (const auto h = line.find('#'); h != std::string_view::npos) line = line.substr(0, h);
        const auto b = line.find_first_not_of(" \t\r");
        if (b == std::string_view::npos) continue;
        line = line.substr(b, line.find_last_not_of(" \t\r") - b + 1);
        std::int64_t v = 0;
        const auto res = std::from_chars(line.data(), line.data() + line.size(), v);
        if (res.ec != std::errc{} || res.ptr != line.data() + line.size()) {
            throw DomainError("set file line " + std::to_string(line_no) + ": not an integer");
        }
        out.push_back(v);
    }
    return out;
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace primediff::report
