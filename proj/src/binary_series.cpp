#include "lrd/binary_series.hpp"

#include <fstream>
#include <stdexcept>

namespace lrd {

RunLengthHistograms run_length_histograms(const BinarySeries& series) {
    RunLengthHistograms hist;
    hist.zeros.assign(2, 0.0);
    hist.ones.assign(2, 0.0);
    const auto& v = series.values;
    std::size_t i = 0;
    while (i < v.size()) {
        const std::uint8_t sym = v[i];
        std::size_t j = i;
        while (j < v.size() && v[j] == sym) ++j;
        const std::size_t len = j - i;
        auto& h = sym ? hist.ones : hist.zeros;
        if (h.size() <= len) h.resize(len + 1, 0.0);
        h[len] += 1.0;
        i = j;
    }
    return hist;
}

void write_binary_series(const BinarySeries& series, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_binary_series: cannot open " + path);
    std::string buf;
    buf.resize(series.values.size());
    for (std::size_t i = 0; i < series.values.size(); ++i)
        buf[i] = series.values[i] ? '1' : '0';
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw std::runtime_error("write_binary_series: write failed for " + path);
}

BinarySeries read_binary_series(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_binary_series: cannot open " + path);
    BinarySeries out;
    char c;
    while (in.get(c)) {
        if (c == '0') out.values.push_back(0);
        else if (c == '1') out.values.push_back(1);
        else if (c == '\n' || c == '\r') continue;  // tolerate trailing newline
        else throw std::runtime_error("read_binary_series: unexpected character in " + path);
    }
    return out;
}

}  // namespace lrd
