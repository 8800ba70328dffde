#include "lrd/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace lrd {

namespace {

std::string fmt_g(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string join_doubles(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ' ';
        out += fmt_g(v[i]);
    }
    return out;
}

struct ModelDescriber {
    std::map<std::string, std::string>& kv;
    void operator()(const WangParams& p) const {
        kv["model"] = "wang";
        kv["model.a"] = fmt_g(p.a);
        kv["model.alpha"] = fmt_g(p.alpha);
    }
    void operator()(const CleggDodsonParams& p) const {
        kv["model"] = "cd";
        kv["model.pi0"] = fmt_g(p.pi0);
        kv["model.alpha"] = fmt_g(p.alpha);
    }
    void operator()(const PsstParams& p) const {
        kv["model"] = p.variant == PsstVariant::A ? "psst-a" : "psst-b";
        kv["model.a"] = fmt_g(p.a);
        kv["model.q"] = fmt_g(p.q);
    }
    void operator()(const ArrowsmithBarencoParams& p) const {
        kv["model"] = "ab";
        kv["model.mean_gap"] = fmt_g(p.off_lengths.mean());
        kv["model.mean_train"] = fmt_g(p.on_lengths.mean());
    }
    void operator()(const FgnParams& p) const {
        kv["model"] = "fgn";
        kv["model.hurst"] = fmt_g(p.hurst);
        kv["model.mu"] = fmt_g(p.mu);
    }
    void operator()(const BernoulliParams& p) const {
        kv["model"] = "bernoulli";
        kv["model.mu"] = fmt_g(p.mu);
    }
};

// failures abort with the pipeline stage in the message
template <typename Fn>
auto stage(const char* name, Fn&& fn) {
    try {
        return fn();
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string("stage ") + name + ": " + e.what());
    }
}

}  // namespace

void ExperimentConfig::validate() const {
    const bool has_model = model.has_value();
    const bool has_file = !trace_path.empty();
    if (has_model == has_file)
        throw std::invalid_argument("config: exactly one of model / trace path required");
    if (!(packet_bits > 0.0)) throw std::invalid_argument("config: packet_bits must be > 0");
    if (!(baseline_bandwidth > 0.0))
        throw std::invalid_argument("config: bandwidth must be > 0");
    if (occupancies.empty()) throw std::invalid_argument("config: no occupancies");
    for (double occ : occupancies)
        if (!(occ > 0.0 && occ < 1.0))
            throw std::invalid_argument("config: occupancies must lie in (0,1)");
    for (double w : hurst_bin_widths)
        if (!(w > 0.0)) throw std::invalid_argument("config: bin widths must be > 0");
    if (has_model && slots == 0 && !(horizon_seconds > 0.0))
        throw std::invalid_argument("config: model source needs slots or horizon_seconds");
}

std::size_t ExperimentConfig::effective_slots() const {
    if (slots > 0) return slots;
    return static_cast<std::size_t>(std::llround(horizon_seconds / slot_dt()));
}

void apply_profile(ExperimentConfig& cfg, const std::string& name) {
    if (name == "bellcore") {
        cfg.packet_bits = 464.0;
        cfg.baseline_bandwidth = 1.96e6;
        cfg.horizon_seconds = 252.0;
        cfg.hurst_bin_widths = {0.1, 0.01, 0.001};
    } else if (name == "caida") {
        cfg.packet_bits = 496.0;
        cfg.baseline_bandwidth = 1.28e8;
        cfg.horizon_seconds = 4.02;
        cfg.hurst_bin_widths = {1e-3, 1e-4, 1e-5};
    } else {
        throw std::invalid_argument("unknown profile: " + name);
    }
}

namespace {

std::vector<HurstRow> hurst_rows_for(const std::string& label, const PacketTrace& trace,
                                     const std::vector<double>& widths) {
    std::vector<HurstRow> rows;
    for (double w : widths) {
        HurstReport report;
        std::string bin_error;
        try {
            const BinnedSeries binned = bin_series(trace, w);
            report = estimate_all(binned);
        } catch (const std::exception& e) {
            bin_error = e.what();
        }
        for (HurstMethod m :
             {HurstMethod::RS, HurstMethod::AggVar, HurstMethod::Periodogram,
              HurstMethod::Wavelet, HurstMethod::LocalWhittle}) {
            HurstRow row;
            row.source = label;
            row.bin_width = w;
            row.method = m;
            if (!bin_error.empty()) {
                row.ok = false;
                row.error = bin_error;
            } else if (auto it = report.estimates.find(m); it != report.estimates.end()) {
                row.ok = true;
                row.estimate = it->second;
            } else {
                row.ok = false;
                row.error = report.failures.at(m);
            }
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

}  // namespace

void write_hurst_csv(const std::vector<HurstRow>& rows, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_hurst_csv: cannot open " + path);
    out << "source,bin_width_s,method,h,fit_lo,fit_hi,slope,residual,error\n";
    for (const auto& r : rows) {
        out << r.source << ',' << fmt_g(r.bin_width) << ',' << hurst_method_name(r.method)
            << ',';
        if (r.ok) {
            out << fmt_g(r.estimate.h) << ',' << fmt_g(r.estimate.fit_lo) << ','
                << fmt_g(r.estimate.fit_hi) << ',' << fmt_g(r.estimate.slope) << ','
                << fmt_g(r.estimate.residual) << ',';
        } else {
            out << ",,,,,";
            std::string msg = r.error;
            std::replace(msg.begin(), msg.end(), ',', ';');
            out << msg;
        }
        out << '\n';
    }
    if (!out) throw std::runtime_error("write_hurst_csv: write failed for " + path);
}

RunBundle run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    std::filesystem::create_directories(cfg.out_dir);
    const auto path_of = [&](const std::string& name) {
        return (std::filesystem::path(cfg.out_dir) / name).string();
    };

    const DigitiserConfig dig_cfg =
        DigitiserConfig::from_bandwidth(cfg.packet_bits, cfg.baseline_bandwidth);

    RunBundle bundle;
    if (cfg.model) {
        SourceResult src;
        src.label = cfg.model_name.empty() ? "model" : cfg.model_name;
        src.trace = stage("generate", [&] {
            const BinarySeries series =
                generate(*cfg.model, cfg.effective_slots(), cfg.seed, cfg.warmup);
            return binary_to_trace(series, dig_cfg);
        });
        bundle.sources.push_back(std::move(src));
    } else {
        auto base = stage("baseline-queue", [&] {
            PacketTrace input = load_trace(cfg.trace_path, cfg.trace_format, cfg.first_n);
            // base case: the departure process of the baseline-bandwidth queue
            const double horizon =
                input.last_arrival() + input.total_bits() / cfg.baseline_bandwidth;
            return simulate_queue(input, QueueConfig{cfg.baseline_bandwidth}, horizon);
        });
        SourceResult raw;
        raw.label = "raw";
        raw.trace = std::move(base.departures);
        raw.trace.duration = raw.trace.last_arrival();

        SourceResult dig;
        dig.label = "digitised";
        dig.trace = stage("digitise", [&] { return digitise(raw.trace, dig_cfg); });
        bundle.sources.push_back(std::move(raw));
        bundle.sources.push_back(std::move(dig));
    }

    for (auto& src : bundle.sources) {
        if (src.trace.empty())
            throw std::runtime_error("run_experiment: source '" + src.label +
                                     "' produced no packets");
        src.sweep = stage("sweep", [&] { return occupancy_sweep(src.trace, cfg.occupancies); });
        src.hurst = stage("hurst",
                          [&] { return hurst_rows_for(src.label, src.trace, cfg.hurst_bin_widths); });
    }

    // CSV bundle
    std::vector<HurstRow> all_hurst;
    const bool single = bundle.sources.size() == 1;
    for (const auto& src : bundle.sources) {
        const std::string suffix = single ? "" : "_" + src.label;
        const std::string sweep_path = path_of("sweep" + suffix + ".csv");
        const std::string exc_path = path_of("exceedance" + suffix + ".csv");
        write_sweep_csv(src.sweep, sweep_path);
        write_exceedance_csv(src.sweep, exc_path);
        bundle.files_written.push_back(sweep_path);
        bundle.files_written.push_back(exc_path);
        all_hurst.insert(all_hurst.end(), src.hurst.begin(), src.hurst.end());
    }
    const std::string hurst_path = path_of("hurst.csv");
    write_hurst_csv(all_hurst, hurst_path);
    bundle.files_written.push_back(hurst_path);

    // manifest: every knob needed to replay the run
    std::map<std::string, std::string> kv;
    if (cfg.model) std::visit(ModelDescriber{kv}, *cfg.model);
    if (!cfg.model_name.empty()) kv["model_label"] = cfg.model_name;
    if (!cfg.trace_path.empty()) {
        kv["trace"] = cfg.trace_path;
        kv["trace_format"] =
            cfg.trace_format == TraceFormat::SecondsBytes ? "seconds_bytes" : "seconds_bits";
        if (cfg.first_n) kv["first"] = std::to_string(*cfg.first_n);
    }
    kv["packet_bits"] = fmt_g(cfg.packet_bits);
    kv["baseline_bandwidth_bps"] = fmt_g(cfg.baseline_bandwidth);
    kv["slot_dt_s"] = fmt_g(cfg.slot_dt());
    kv["occupancies"] = join_doubles(cfg.occupancies);
    kv["hurst_bin_widths_s"] = join_doubles(cfg.hurst_bin_widths);
    kv["seed"] = std::to_string(cfg.seed);
    if (cfg.model) {
        kv["slots"] = std::to_string(cfg.effective_slots());
        kv["warmup_slots"] = std::to_string(cfg.warmup);
    }
    const std::string manifest_path = path_of("manifest.txt");
    std::ofstream manifest(manifest_path);
    if (!manifest) throw std::runtime_error("run_experiment: cannot write manifest");
    for (const auto& [key, value] : kv) manifest << key << " = " << value << '\n';
    manifest.close();
    bundle.files_written.push_back(manifest_path);
    return bundle;
}

void write_compare_csv(const std::vector<LabelledSweep>& sweeps, const std::string& path) {
    if (sweeps.size() < 2)
        throw std::invalid_argument("compare: need at least two sweeps");
    const auto& grid = sweeps.front().rows;
    for (const auto& s : sweeps) {
        if (s.rows.size() != grid.size())
            throw std::invalid_argument("compare: sweep grids differ in size");
        for (std::size_t i = 0; i < grid.size(); ++i)
            if (std::fabs(s.rows[i].occupancy - grid[i].occupancy) > 1e-12)
                throw std::invalid_argument("compare: sweep occupancy grids differ");
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_compare_csv: cannot open " + path);
    out << "occupancy";
    for (const auto& s : sweeps)
        out << ',' << s.label << "_mean_q_packets" << ',' << s.label << "_mean_q_bits" << ','
            << s.label << "_p_ge_5" << ',' << s.label << "_p_ge_20";
    out << '\n';
    for (std::size_t i = 0; i < grid.size(); ++i) {
        out << fmt_g(grid[i].occupancy);
        for (const auto& s : sweeps) {
            const auto& r = s.rows[i];
            out << ',' << fmt_g(r.stats.mean_q_packets) << ',' << fmt_g(r.stats.mean_q_bits)
                << ',' << fmt_g(r.stats.p_ge(5)) << ',' << fmt_g(r.stats.p_ge(20));
        }
        out << '\n';
    }
    if (!out) throw std::runtime_error("write_compare_csv: write failed for " + path);
}

std::vector<SweepRow> read_sweep_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_sweep_csv: cannot open " + path);
    std::string line;
    if (!std::getline(in, line) ||
        line != "occupancy,bandwidth_bps,mean_q_packets,mean_q_bits,p_ge_5,p_ge_20,horizon_s")
        throw std::runtime_error("read_sweep_csv: unrecognized header in " + path);
    std::vector<SweepRow> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        SweepRow row;
        double p5, p20;
        if (!(ss >> row.occupancy >> row.bandwidth_bps >> row.stats.mean_q_packets >>
              row.stats.mean_q_bits >> p5 >> p20 >> row.stats.horizon))
            throw std::runtime_error("read_sweep_csv: bad row at " + path + ":" +
                                     std::to_string(lineno));
        // rebuild a two-point exceedance so p_ge(5)/p_ge(20) survive a round trip
        row.stats.time_at_count.assign(21, 0.0);
        row.stats.time_at_count[20] = p20 * row.stats.horizon;
        row.stats.time_at_count[5] = (p5 - p20) * row.stats.horizon;
        rows.push_back(row);
    }
    if (rows.empty()) throw std::runtime_error("read_sweep_csv: no rows in " + path);
    return rows;
}

std::vector<SegmentResult> segment_analysis(const PacketTrace& trace,
                                            std::size_t segment_packets,
                                            const std::vector<double>& occupancies,
                                            double baseline_bandwidth) {
    if (segment_packets == 0)
        throw std::invalid_argument("segment_analysis: segment size must be > 0");
    const std::size_t n_segments = trace.records.size() / segment_packets;
    if (n_segments < 2)
        throw std::invalid_argument("segment_analysis: trace shorter than two segments");
    if (!(baseline_bandwidth > 0.0))
        throw std::invalid_argument("segment_analysis: bandwidth must be > 0");

    std::vector<SegmentResult> out;
    out.reserve(n_segments);
    for (std::size_t s = 0; s < n_segments; ++s) {
        const std::size_t begin = s * segment_packets;
        const std::size_t end = begin + segment_packets;
        const double t0 = trace.records[begin].time;
        const double t_end = end < trace.records.size()
                                 ? trace.records[end].time
                                 : std::max(trace.duration, trace.records.back().time);
        PacketTrace seg;
        seg.records.reserve(segment_packets);
        double bits = 0.0;
        for (std::size_t i = begin; i < end; ++i) {
            seg.records.push_back({trace.records[i].time - t0, trace.records[i].bits});
            bits += trace.records[i].bits;
        }
        seg.duration = std::max(t_end - t0, seg.records.back().time);
        SegmentResult result;
        result.index = s;
        result.packets = segment_packets;
        result.duration = seg.duration;
        result.occupancy_at_baseline = bits / (baseline_bandwidth * seg.duration);
        result.sweep = occupancy_sweep(seg, occupancies);
        out.push_back(std::move(result));
    }
    return out;
}

void write_segments_csv(const std::vector<SegmentResult>& segments, const std::string& dir) {
    std::filesystem::create_directories(dir);
    const auto base = std::filesystem::path(dir);
    std::ofstream summary(base / "segments_summary.csv");
    if (!summary) throw std::runtime_error("write_segments_csv: cannot open summary");
    summary << "segment,packets,duration_s,occupancy_at_baseline\n";
    for (const auto& seg : segments) {
        summary << seg.index << ',' << seg.packets << ',' << fmt_g(seg.duration) << ','
                << fmt_g(seg.occupancy_at_baseline) << '\n';
        char name[64];
        std::snprintf(name, sizeof name, "sweep_seg%02zu.csv", seg.index);
        write_sweep_csv(seg.sweep, (base / name).string());
    }
}

}  // namespace lrd
