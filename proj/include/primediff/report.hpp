#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "primediff/avoider.hpp"
#include "primediff/driver.hpp"
#include "primediff/lambda.hpp"

namespace primediff::report {

/// Everything that determines an output's bytes. Worker count is deliberately absent.
struct RunManifest {
    std::string command;
    std::vector<std::pair<std::string, std::string>> parameters;  // in insertion order
    std::uint64_t seed = 0;
    std::string version = "primediff " PRIMEDIFF_VERSION;
    std::string timestamp;

    std::string to_json() const;
};

/// printf("%.12g").
std::string format_number(double v);

/// Header `theta,a,q,class,actual,bound,ratio`, one row per grid point, then
/// a trailing `# manifest {...}` line.
void write_spectrum_csv(std::ostream& out, const std::vector<lambda::BoundReport>& rows,
                        const RunManifest& manifest);

std::string extremal_json(std::int64_t N, std::int64_t d, const avoider::SearchResult& result,
                          const RunManifest& manifest);

/// One JSON object per step; the manifest rides on the first line.
void write_trace_jsonl(std::ostream& out, const driver::Trace& trace, const RunManifest& manifest);

/// One integer per line, `#` starts a comment. Throws DomainError on junk.
std::vector<std::int64_t> parse_set_file(std::string_view text);

/// Current UTC time as YYYY-MM-DDTHH:MM:SSZ.
std::string utc_timestamp();

}  // namespace primediff::report
