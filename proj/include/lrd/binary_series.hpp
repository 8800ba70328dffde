#pragma once
// On/off symbol sequence: one 0/1 symbol per time slot.

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

namespace lrd {

struct BinarySeries {
    std::vector<std::uint8_t> values;

    std::size_t length() const { return values.size(); }

    std::size_t ones() const {
        return std::accumulate(values.begin(), values.end(), std::size_t{0});
    }

    double mean() const {
        return values.empty() ? 0.0 : static_cast<double>(ones()) / values.size();
    }
};

// Run-length histograms: hist[k] = number of maximal runs of length k.
// Index 0 is unused.
struct RunLengthHistograms {
    std::vector<double> zeros;
    std::vector<double> ones;
};

RunLengthHistograms run_length_histograms(const BinarySeries& series);

// Text export: a stream of '0'/'1' characters, no newlines.
void write_binary_series(const BinarySeries& series, const std::string& path);
BinarySeries read_binary_series(const std::string& path);

}  // namespace lrd
