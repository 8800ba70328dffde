#pragma once
// Experiment orchestration: configure a source (model or trace file), run
// the generate -> digitise/queue -> occupancy sweep -> Hurst table
// pipeline, and emit plot-ready CSV bundles with a reproducibility
// manifest.  Same config + seed gives byte-identical outputs.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lrd/hurst.hpp"
#include "lrd/models.hpp"
#include "lrd/queue.hpp"
#include "lrd/trace_io.hpp"

namespace lrd {

struct ExperimentConfig {
    // Source: exactly one of model / trace_path.
    std::optional<ModelParams> model;
    std::string model_name;  // label in outputs ("wang", "cd", ...)
    std::string trace_path;
    TraceFormat trace_format = TraceFormat::SecondsBits;
    std::optional<std::size_t> first_n;

    double packet_bits = 464.0;
    double baseline_bandwidth = 1.96e6;  // fixes the slot width dt = l/b
    std::vector<double> occupancies = {0.10, 0.15, 0.20, 0.25, 0.30, 0.35,
                                       0.40, 0.45, 0.50, 0.55, 0.60};
    std::vector<double> hurst_bin_widths = {0.1, 0.01, 0.001};
    std::uint64_t seed = 1;
    std::size_t slots = 0;          // number of slots to generate, or ...
    double horizon_seconds = 0.0;   // ... slots = round(horizon / dt)
    std::size_t warmup = 10000;     // discarded slots before the series starts
    std::string out_dir = ".";

    void validate() const;
    double slot_dt() const { return packet_bits / baseline_bandwidth; }
    std::size_t effective_slots() const;
};

// Paper-named defaults, overridable afterwards.
void apply_profile(ExperimentConfig& cfg, const std::string& name);  // bellcore | caida

struct HurstRow {
    std::string source;
    double bin_width;
    HurstMethod method;
    bool ok;
    HurstEstimate estimate;  // valid when ok
    std::string error;       // reason when !ok
};

struct SourceResult {
    std::string label;  // model name, or "raw" / "digitised" for file input
    PacketTrace trace;
    std::vector<SweepRow> sweep;
    std::vector<HurstRow> hurst;
};

struct RunBundle {
    std::vector<SourceResult> sources;
    std::vector<std::string> files_written;
};

// Full pipeline.  Model sources yield one result; file sources yield the
// baseline-queued "raw" trace plus its slot-digitised variant.  Writes
// sweep[_label].csv, exceedance[_label].csv, hurst.csv and manifest.txt
// into cfg.out_dir.
RunBundle run_experiment(const ExperimentConfig& cfg);

// Merges sweeps taken on identical occupancy grids into one table with a
// column group per source.  Throws on mismatched grids.
struct LabelledSweep {
    std::string label;
    std::vector<SweepRow> rows;
};
void write_compare_csv(const std::vector<LabelledSweep>& sweeps, const std::string& path);

// File-based convenience used by the CLI: reads sweep CSVs produced by
// this library.
std::vector<SweepRow> read_sweep_csv(const std::string& path);

struct SegmentResult {
    std::size_t index = 0;
    std::size_t packets = 0;
    double duration = 0.0;
    double occupancy_at_baseline = 0.0;
    std::vector<SweepRow> sweep;
};

// Splits the trace into consecutive segments of segment_packets packets
// (the remainder is dropped) and sweeps each segment independently.
// Throws unless at least two full segments exist.
std::vector<SegmentResult> segment_analysis(const PacketTrace& trace,
                                            std::size_t segment_packets,
                                            const std::vector<double>& occupancies,
                                            double baseline_bandwidth);

void write_segments_csv(const std::vector<SegmentResult>& segments, const std::string& dir);

// Hurst table CSV: source,bin_width_s,method,h,fit_lo,fit_hi,slope,residual,error
void write_hurst_csv(const std::vector<HurstRow>& rows, const std::string& path);

}  // namespace lrd
