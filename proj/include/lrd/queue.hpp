#pragma once
// Single-server FIFO link, slot digitiser and occupancy sweeps.
//
// A packet of L bits entering a link of bandwidth b occupies the server
// for L/b seconds once service starts; the whole packet counts toward the
// queue (in packets and in bits) from its arrival until its departure
// instant.  Statistics are exact time averages of the piecewise-constant
// queue-length process.  At equal timestamps departures are processed
// before arrivals.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "lrd/binary_series.hpp"

namespace lrd {

struct PacketRecord {
    double time;  // arrival, seconds; nondecreasing within a trace
    double bits;  // > 0

    bool operator==(const PacketRecord&) const = default;
};

struct PacketTrace {
    std::vector<PacketRecord> records;
    // Observation window [0, duration].  Slot traces keep their trailing
    // gap here; loaded traces default to the last arrival time.
    double duration = 0.0;

    bool empty() const { return records.empty(); }
    double total_bits() const;
    double last_arrival() const { return records.empty() ? 0.0 : records.back().time; }
    void validate() const;  // throws on disorder or non-positive lengths
};

struct QueueConfig {
    double bandwidth_bps;  // > 0
};

struct QueueStats {
    double horizon = 0.0;         // seconds integrated over
    double mean_q_packets = 0.0;  // time-averaged packets in system
    double mean_q_bits = 0.0;     // time-averaged bits in system
    double occupancy = 0.0;       // total bits in / (bandwidth * horizon)
    double total_bits_in = 0.0;
    double total_bits_out = 0.0;          // departed by the horizon
    double bits_in_queue_at_horizon = 0.0;
    // time_at_count[q] = time the system held exactly q packets
    std::vector<double> time_at_count;

    // Stationary-time exceedance P(Q >= q).
    double p_ge(std::size_t q) const;
    std::map<std::size_t, double> exceedance(const std::vector<std::size_t>& thresholds) const;
};

struct QueueResult {
    QueueStats stats;
    PacketTrace departures;  // departure instants within the horizon, FIFO order
};

// Simulates the FIFO link over [0, horizon].  Packets must arrive inside
// the horizon; packets still in the system at the horizon are counted in
// bits_in_queue_at_horizon and omitted from the departure trace.
QueueResult simulate_queue(const PacketTrace& trace, const QueueConfig& cfg, double horizon);

struct DigitiserConfig {
    double packet_bits;  // l > 0
    double slot_dt;      // dt > 0

    static DigitiserConfig from_bandwidth(double packet_bits, double bandwidth_bps);
};

// Slot digitiser: at every time n*dt (arrivals at exactly n*dt included),
// if at least l undelivered bits have accumulated, emit exactly one packet
// of length l.  Residual bits below l stay unemitted.
PacketTrace digitise(const PacketTrace& trace, const DigitiserConfig& cfg);

// Slot i of the series becomes a packet (i*dt, l) when its symbol is 1.
PacketTrace binary_to_trace(const BinarySeries& series, const DigitiserConfig& cfg);

// Inverse view of a digitised trace: symbol 1 in every slot that holds a
// packet.  Requires on-grid times and at most one packet per slot.
BinarySeries trace_to_binary(const PacketTrace& trace, const DigitiserConfig& cfg);

// Pollaczek-Khinchin mean number in system for an M/D/1 queue.
double pk_expected_queue(double rho);

struct SweepRow {
    double occupancy;
    double bandwidth_bps;
    QueueStats stats;
};

// For each target occupancy, solve total_bits/(b*duration) = occupancy for
// the bandwidth and queue the trace through it.  Rows come back in input
// order; the points run concurrently.
std::vector<SweepRow> occupancy_sweep(const PacketTrace& trace,
                                      const std::vector<double>& occupancies);

// Stats CSV: occupancy,bandwidth_bps,mean_q_packets,mean_q_bits,p_ge_5,p_ge_20,horizon_s
void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path);

// Exceedance CSV: occupancy,threshold,probability for q = 1..max shown.
void write_exceedance_csv(const std::vector<SweepRow>& rows, const std::string& path,
                          std::size_t max_threshold = 1000);

}  // namespace lrd
