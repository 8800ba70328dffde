#include "lrd/trace_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace lrd {

namespace {

[[noreturn]] void fail(const std::string& path, std::size_t line, const std::string& what) {
    throw std::runtime_error(path + ":" + std::to_string(line) + ": " + what);
}

}  // namespace

PacketTrace load_trace(const std::string& path, TraceFormat format,
                       std::optional<std::size_t> first_n) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_trace: cannot open " + path);
    PacketTrace trace;
    std::string line;
    std::size_t lineno = 0;
    double prev_time = 0.0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        double t, len;
        if (!(ss >> t >> len)) fail(path, lineno, "expected 'time length'");
        std::string rest;
        if (ss >> rest) fail(path, lineno, "trailing junk after record");
        if (!(len > 0.0)) fail(path, lineno, "packet length must be > 0");
        if (!trace.records.empty() && t < prev_time)
            fail(path, lineno, "decreasing timestamp");
        prev_time = t;
        const double bits = format == TraceFormat::SecondsBytes ? len * 8.0 : len;
        trace.records.push_back({t, bits});
        if (first_n && trace.records.size() >= *first_n) break;
    }
    if (trace.records.empty())
        throw std::runtime_error("load_trace: no records in " + path);
    trace.duration = trace.records.back().time;
    return trace;
}

void save_trace(const PacketTrace& trace, const std::string& path, TraceFormat format) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_trace: cannot open " + path);
    char buf[128];
    for (const auto& r : trace.records) {
        double len = r.bits;
        if (format == TraceFormat::SecondsBytes) {
            len = r.bits / 8.0;
            if (std::fabs(len - std::round(len)) > 1e-9)
                throw std::runtime_error(
                    "save_trace: length not a whole number of bytes; refusing to round");
        }
        if (std::fabs(len - std::round(len)) < 1e-9) {
            std::snprintf(buf, sizeof buf, "%.9f %lld\n", r.time,
                          static_cast<long long>(std::llround(len)));
        } else {
            std::snprintf(buf, sizeof buf, "%.9f %.17g\n", r.time, len);
        }
        out << buf;
    }
    if (!out) throw std::runtime_error("save_trace: write failed for " + path);
}

}  // namespace lrd
