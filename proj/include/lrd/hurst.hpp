#pragma once
// Hurst parameter estimation: R/S, aggregated variance, periodogram,
// wavelet energy and local Whittle, on binned count series.
//
// All five estimators are invariant to scaling the counts by a positive
// constant and to adding a constant (mean removal is internal), so it does
// not matter whether a series is binned in bits, bytes or packets.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lrd/binary_series.hpp"
#include "lrd/queue.hpp"

namespace lrd {

struct BinnedSeries {
    std::vector<double> counts;  // bits (or packets) per bin
    double bin_width = 1.0;      // seconds
};

// Bin i sums the lengths of packets arriving in [i*w, (i+1)*w); the number
// of bins is ceil(duration / w).  Throws on an empty trace.
BinnedSeries bin_series(const PacketTrace& trace, double bin_width);

// Convenience for slot series: sums symbols over fixed windows of
// slots_per_bin slots (partial trailing windows are kept).
BinnedSeries bin_binary(const BinarySeries& series, std::size_t slots_per_bin);

enum class HurstMethod { RS, AggVar, Periodogram, Wavelet, LocalWhittle };

const char* hurst_method_name(HurstMethod m);

struct HurstEstimate {
    HurstMethod method;
    double h = 0.0;
    // regression diagnostics: fitted range (block size, frequency or
    // octave, method-dependent units), slope and RMS residual
    double fit_lo = 0.0;
    double fit_hi = 0.0;
    double slope = 0.0;
    double residual = 0.0;
};

struct HurstOptions {
    // R/S and aggregated variance
    double min_block = 10.0;
    double min_blocks_per_size = 10.0;   // largest block = n / this
    int sizes_per_decade = 12;
    double rs_fit_exclude_decades = 1.0;  // drop the smallest decade from the R/S fit
    // periodogram
    double low_freq_fraction = 0.1;
    // wavelet (db2, periodized; series truncated to a power of two)
    int wavelet_min_octave = 3;
    int wavelet_trim_top_octaves = 4;
    // local Whittle
    double whittle_bandwidth_exponent = 0.65;  // m = floor(n^e)
    double whittle_tolerance = 1e-6;
};

// Single-method estimate.  Throws std::invalid_argument when the series is
// shorter than 256 points or has zero variance.
HurstEstimate estimate(const BinnedSeries& series, HurstMethod method,
                       const HurstOptions& options = {});

struct HurstReport {
    std::map<HurstMethod, HurstEstimate> estimates;
    std::map<HurstMethod, std::string> failures;  // method -> reason
};

// Runs all five methods; a method's failure is recorded, never fatal.
HurstReport estimate_all(const BinnedSeries& series, const HurstOptions& options = {});

}  // namespace lrd
