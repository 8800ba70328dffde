#include "lrd/queue.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <stdexcept>

namespace lrd {

double PacketTrace::total_bits() const {
    double sum = 0.0;
    for (const auto& r : records) sum += r.bits;
    return sum;
}

void PacketTrace::validate() const {
    double prev = 0.0;
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (!(records[i].bits > 0.0))
            throw std::invalid_argument("PacketTrace: packet length must be > 0");
        if (records[i].time < prev)
            throw std::invalid_argument("PacketTrace: arrival times must be nondecreasing");
        prev = records[i].time;
    }
}

double QueueStats::p_ge(std::size_t q) const {
    if (horizon <= 0.0) return 0.0;
    double t = 0.0;
    for (std::size_t c = q; c < time_at_count.size(); ++c) t += time_at_count[c];
    return t / horizon;
}

std::map<std::size_t, double> QueueStats::exceedance(
    const std::vector<std::size_t>& thresholds) const {
    std::map<std::size_t, double> out;
    for (std::size_t q : thresholds) out[q] = p_ge(q);
    return out;
}

QueueResult simulate_queue(const PacketTrace& trace, const QueueConfig& cfg, double horizon) {
    if (!(cfg.bandwidth_bps > 0.0))
        throw std::invalid_argument("simulate_queue: bandwidth must be > 0");
    if (!(horizon > 0.0)) throw std::invalid_argument("simulate_queue: horizon must be > 0");
    trace.validate();
    if (!trace.records.empty() && trace.records.back().time > horizon)
        throw std::invalid_argument("simulate_queue: packet arrives after the horizon");

    const std::size_t n = trace.records.size();
    const double b = cfg.bandwidth_bps;

    // FIFO departures
    std::vector<double> dep(n);
    {
        double server_free = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double start = std::max(trace.records[i].time, server_free);
            server_free = start + trace.records[i].bits / b;
            dep[i] = server_free;
        }
    }

    QueueStats stats;
    stats.horizon = horizon;
    stats.total_bits_in = trace.total_bits();
    stats.occupancy = stats.total_bits_in / (b * horizon);
    stats.time_at_count.assign(1, 0.0);

    PacketTrace departures;
    departures.duration = horizon;

    // Merge arrivals and departures; both streams are time-sorted and
    // departures win ties.
    std::size_t ai = 0, di = 0;
    double now = 0.0;
    double q_bits = 0.0;
    std::size_t q_packets = 0;
    double int_packets = 0.0, int_bits = 0.0;

    const auto advance_to = [&](double t) {
        const double span = t - now;
        if (span > 0.0) {
            int_packets += span * static_cast<double>(q_packets);
            int_bits += span * q_bits;
            if (stats.time_at_count.size() <= q_packets)
                stats.time_at_count.resize(q_packets + 1, 0.0);
            stats.time_at_count[q_packets] += span;
            now = t;
        }
    };

    while (true) {
        const bool has_dep = di < n && dep[di] <= horizon;
        const bool has_arr = ai < n;
        if (!has_dep && !has_arr) break;
        if (!has_arr || (has_dep && dep[di] <= trace.records[ai].time)) {
            advance_to(dep[di]);
            q_packets -= 1;
            q_bits -= trace.records[di].bits;
            departures.records.push_back({dep[di], trace.records[di].bits});
            stats.total_bits_out += trace.records[di].bits;
            ++di;
        } else {
            if (trace.records[ai].time > horizon) break;
            advance_to(trace.records[ai].time);
            q_packets += 1;
            q_bits += trace.records[ai].bits;
            ++ai;
        }
    }
    advance_to(horizon);

    stats.mean_q_packets = int_packets / horizon;
    stats.mean_q_bits = int_bits / horizon;
    stats.bits_in_queue_at_horizon = q_bits;
    return {std::move(stats), std::move(departures)};
}

DigitiserConfig DigitiserConfig::from_bandwidth(double packet_bits, double bandwidth_bps) {
    if (!(packet_bits > 0.0) || !(bandwidth_bps > 0.0))
        throw std::invalid_argument("DigitiserConfig: l and b must be > 0");
    return {packet_bits, packet_bits / bandwidth_bps};
}

PacketTrace digitise(const PacketTrace& trace, const DigitiserConfig& cfg) {
    if (!(cfg.packet_bits > 0.0) || !(cfg.slot_dt > 0.0))
        throw std::invalid_argument("digitise: l and dt must be > 0");
    trace.validate();

    const double l = cfg.packet_bits, dt = cfg.slot_dt;
    PacketTrace out;
    double backlog = 0.0;
    std::size_t idx = 0;
    long slot = 0;
    double last_emit = -1.0;
    while (true) {
        if (backlog < l) {
            if (idx >= trace.records.size()) break;
            // jump straight to the first slot with slot*dt >= next arrival,
            // adjusted so the division agrees with the comparison below
            const double arr = trace.records[idx].time;
            long next_slot = static_cast<long>(std::ceil(arr / dt));
            while (next_slot > 0 && static_cast<double>(next_slot - 1) * dt >= arr)
                --next_slot;
            while (static_cast<double>(next_slot) * dt < arr) ++next_slot;
            slot = std::max(slot, next_slot);
        }
        const double t = static_cast<double>(slot) * dt;
        while (idx < trace.records.size() && trace.records[idx].time <= t)
            backlog += trace.records[idx++].bits;
        if (backlog >= l) {
            out.records.push_back({t, l});
            backlog -= l;
            last_emit = t;
        }
        ++slot;
    }
    out.duration = std::max(trace.duration, last_emit + dt);
    if (out.duration <= 0.0) out.duration = dt;
    return out;
}

PacketTrace binary_to_trace(const BinarySeries& series, const DigitiserConfig& cfg) {
    if (!(cfg.packet_bits > 0.0) || !(cfg.slot_dt > 0.0))
        throw std::invalid_argument("binary_to_trace: l and dt must be > 0");
    PacketTrace out;
    out.records.reserve(series.ones());
    for (std::size_t i = 0; i < series.values.size(); ++i)
        if (series.values[i])
            out.records.push_back({static_cast<double>(i) * cfg.slot_dt, cfg.packet_bits});
    out.duration = static_cast<double>(series.values.size()) * cfg.slot_dt;
    return out;
}

BinarySeries trace_to_binary(const PacketTrace& trace, const DigitiserConfig& cfg) {
    if (!(cfg.packet_bits > 0.0) || !(cfg.slot_dt > 0.0))
        throw std::invalid_argument("trace_to_binary: l and dt must be > 0");
    trace.validate();
    const double dt = cfg.slot_dt;
    const double duration = trace.duration > 0.0 ? trace.duration : trace.last_arrival() + dt;
    BinarySeries out;
    out.values.assign(static_cast<std::size_t>(std::ceil(duration / dt)), 0);
    for (const auto& r : trace.records) {
        const double slot_f = r.time / dt;
        const long slot = std::lround(slot_f);
        if (std::fabs(slot_f - static_cast<double>(slot)) > 1e-6)
            throw std::invalid_argument("trace_to_binary: arrival off the slot grid");
        const std::size_t s = static_cast<std::size_t>(slot);
        if (s >= out.values.size()) out.values.resize(s + 1, 0);
        if (out.values[s])
            throw std::invalid_argument("trace_to_binary: two packets in one slot");
        out.values[s] = 1;
    }
    return out;
}

double pk_expected_queue(double rho) {
    if (!(rho >= 0.0 && rho < 1.0))
        throw std::invalid_argument("pk_expected_queue: rho must lie in [0,1)");
    return rho + rho * rho / (2.0 * (1.0 - rho));
}

std::vector<SweepRow> occupancy_sweep(const PacketTrace& trace,
                                      const std::vector<double>& occupancies) {
    if (trace.empty()) throw std::invalid_argument("occupancy_sweep: empty trace");
    for (double occ : occupancies)
        if (!(occ > 0.0 && occ < 1.0))
            throw std::invalid_argument("occupancy_sweep: occupancies must lie in (0,1)");
    const double duration = trace.duration > 0.0 ? trace.duration : trace.last_arrival();
    if (!(duration > 0.0)) throw std::invalid_argument("occupancy_sweep: zero duration");
    const double bits = trace.total_bits();

    std::vector<std::future<SweepRow>> futures;
    futures.reserve(occupancies.size());
    for (double occ : occupancies) {
        futures.push_back(std::async(std::launch::async, [&, occ]() {
            const double b = bits / (occ * duration);
            auto result = simulate_queue(trace, QueueConfig{b}, duration);
            return SweepRow{occ, b, std::move(result.stats)};
        }));
    }
    std::vector<SweepRow> rows;
    rows.reserve(occupancies.size());
    for (auto& f : futures) rows.push_back(f.get());
    return rows;
}

namespace {

std::string fmt_g(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

}  // namespace

void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_sweep_csv: cannot open " + path);
    out << "occupancy,bandwidth_bps,mean_q_packets,mean_q_bits,p_ge_5,p_ge_20,horizon_s\n";
    for (const auto& r : rows) {
        out << fmt_g(r.occupancy) << ',' << fmt_g(r.bandwidth_bps) << ','
            << fmt_g(r.stats.mean_q_packets) << ',' << fmt_g(r.stats.mean_q_bits) << ','
            << fmt_g(r.stats.p_ge(5)) << ',' << fmt_g(r.stats.p_ge(20)) << ','
            << fmt_g(r.stats.horizon) << '\n';
    }
    if (!out) throw std::runtime_error("write_sweep_csv: write failed for " + path);
}

void write_exceedance_csv(const std::vector<SweepRow>& rows, const std::string& path,
                          std::size_t max_threshold) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_exceedance_csv: cannot open " + path);
    out << "occupancy,threshold,probability\n";
    for (const auto& r : rows) {
        const std::size_t top =
            std::min(max_threshold + 1, r.stats.time_at_count.size());
        double tail = 0.0;
        std::vector<double> p(top, 0.0);
        for (std::size_t q = r.stats.time_at_count.size(); q-- > 0;) {
            tail += r.stats.time_at_count[q];
            if (q < top) p[q] = tail / r.stats.horizon;
        }
        for (std::size_t q = 1; q < top; ++q)
            out << fmt_g(r.occupancy) << ',' << q << ',' << fmt_g(p[q]) << '\n';
    }
    if (!out) throw std::runtime_error("write_exceedance_csv: write failed for " + path);
}

}  // namespace lrd
