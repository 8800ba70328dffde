// lrdbench: long-range dependent on/off traffic workbench.
//
// Subcommands cover the whole pipeline: generate model series, queue or
// digitise traces, sweep occupancies, estimate Hurst parameters, evaluate
// the exact PSST return-time tail, merge sweeps and split traces into
// segments.  Exit codes: 0 success, 1 validation error, 2 runtime error.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "lrd/binary_series.hpp"
#include "lrd/exact_tail.hpp"
#include "lrd/experiment.hpp"
#include "lrd/fgn.hpp"
#include "lrd/models.hpp"
#include "lrd/queue.hpp"
#include "lrd/trace_io.hpp"

namespace {

struct ModelFlags {
    std::string model;
    double mu = -1.0;
    double hurst = -1.0;
    double alpha = -1.0;
    double a = -1.0;
    double q = -1.0;
    double pi0 = -1.0;
    std::string fit_in;  // trace file for fitting the double-sided model
    std::string fit_format = "bits";
};

lrd::TraceFormat parse_format(const std::string& name) {
    if (name == "bits") return lrd::TraceFormat::SecondsBits;
    if (name == "bytes") return lrd::TraceFormat::SecondsBytes;
    throw CLI::ValidationError("--format must be 'bits' or 'bytes'");
}

void add_model_flags(CLI::App* app, ModelFlags& f, bool required) {
    auto* opt = app->add_option("--model", f.model,
                                "Source model: wang|cd|psst-a|psst-b|ab|fgn|bernoulli");
    if (required) opt->required();
    app->add_option("--mu", f.mu, "Target mean on-probability");
    app->add_option("--hurst", f.hurst, "Hurst parameter (fgn; wang/cd via alpha=2-2H)");
    app->add_option("--alpha", f.alpha, "Tail exponent (wang, cd)");
    app->add_option("--a", f.a, "Model parameter a (wang, psst)");
    app->add_option("--q", f.q, "PSST q parameter");
    app->add_option("--pi0", f.pi0, "Zero-state equilibrium probability (cd)");
    app->add_option("--fit-in", f.fit_in, "Trace to fit the ab model from");
    app->add_option("--fit-format", f.fit_format, "Format of --fit-in: bits|bytes");
}

lrd::ModelParams make_model(const ModelFlags& f, double packet_bits, double bandwidth) {
    using namespace lrd;
    const auto need = [](bool ok, const char* what) {
        if (!ok) throw CLI::ValidationError(std::string("model flags: ") + what);
    };
    const auto alpha_from_flags = [&]() {
        if (f.alpha > 0.0) return f.alpha;
        need(f.hurst > 0.0, "need --alpha or --hurst");
        return 2.0 - 2.0 * f.hurst;
    };
    if (f.model == "wang") {
        const double alpha = alpha_from_flags();
        need(f.a > 0.0 || f.mu > 0.0, "wang needs --a or --mu");
        const double a = f.a > 0.0 ? f.a : wang_fit_a(f.mu, alpha);
        return WangParams(a, alpha);
    }
    if (f.model == "cd") {
        const double alpha = alpha_from_flags();
        need(f.pi0 > 0.0 || f.mu > 0.0, "cd needs --pi0 or --mu");
        const double pi0 = f.pi0 > 0.0 ? f.pi0 : 1.0 - f.mu;
        return CleggDodsonParams(pi0, alpha);
    }
    if (f.model == "psst-a" || f.model == "psst-b") {
        const PsstVariant variant = f.model == "psst-a" ? PsstVariant::A : PsstVariant::B;
        need(f.a > 0.0, "psst needs --a");
        need(f.q > 0.0 || f.mu > 0.0, "psst needs --q or --mu");
        const double q = f.q > 0.0 ? f.q : psst_fit_q(f.mu, variant);
        return PsstParams(f.a, q, variant);
    }
    if (f.model == "ab") {
        need(!f.fit_in.empty(), "ab needs --fit-in <trace>");
        const auto input = load_trace(f.fit_in, parse_format(f.fit_format));
        const auto cfg = DigitiserConfig::from_bandwidth(packet_bits, bandwidth);
        const auto digitised = digitise(input, cfg);
        const auto series = trace_to_binary(digitised, cfg);
        const auto hist = run_length_histograms(series);
        return ab_fit_from_empirical(hist.ones, hist.zeros);
    }
    if (f.model == "fgn") {
        need(f.hurst > 0.0 && f.mu > 0.0, "fgn needs --hurst and --mu");
        return FgnParams(f.hurst, f.mu);
    }
    if (f.model == "bernoulli") {
        need(f.mu >= 0.0, "bernoulli needs --mu");
        return BernoulliParams(f.mu);
    }
    throw CLI::ValidationError("unknown --model " + f.model);
}

std::string out_dir_default() {
    if (const char* env = std::getenv("LRDBENCH_OUT_DIR")) return env;
    return ".";
}

int run(int argc, char** argv) {
    CLI::App app{"Markov-modulated on/off traffic workbench"};
    app.require_subcommand(1);

    std::string out_dir = out_dir_default();
    app.add_option("--out-dir", out_dir, "Output directory (env LRDBENCH_OUT_DIR)")
        ->capture_default_str();
    app.set_config("--config", "",
                   "Experiment file: key = value lines under a [sweep] section");

    // ---- generate ---------------------------------------------------------
    auto* gen = app.add_subcommand("generate", "Emit an on/off series as 0/1 text");
    ModelFlags gen_model;
    add_model_flags(gen, gen_model, true);
    std::uint64_t gen_seed = 1;
    std::size_t gen_slots = 0, gen_packets = 0, gen_warmup = 0;
    double gen_bits = 464.0, gen_bw = 1.96e6;
    std::string gen_out = "series.txt", gen_trace_out;
    gen->add_option("--seed", gen_seed, "RNG seed");
    gen->add_option("--slots", gen_slots, "Series length in slots");
    gen->add_option("--packets", gen_packets, "Generate until this many packets (ones)");
    gen->add_option("--warmup", gen_warmup, "Slots discarded before the series starts");
    gen->add_option("--packet-bits", gen_bits, "Packet length l in bits");
    gen->add_option("--bandwidth", gen_bw, "Generation bandwidth b in bits/s (dt = l/b)");
    gen->add_option("--out", gen_out, "Series file (0/1 characters)");
    gen->add_option("--trace-out", gen_trace_out, "Optional packet trace output");

    // ---- queue ------------------------------------------------------------
    auto* qcmd = app.add_subcommand("queue", "Queue a trace through a FIFO link");
    std::string q_in, q_format = "bits", q_departures, q_stats = "queue_stats.csv";
    double q_bw = 1.96e6, q_horizon = 0.0;
    std::size_t q_first = 0;
    qcmd->add_option("--in", q_in, "Input trace")->required();
    qcmd->add_option("--format", q_format, "bits|bytes");
    qcmd->add_option("--bandwidth", q_bw, "Link bandwidth bits/s");
    qcmd->add_option("--horizon", q_horizon, "Horizon seconds (default: drain time)");
    qcmd->add_option("--first", q_first, "Use only the first N packets");
    qcmd->add_option("--departures-out", q_departures, "Write the departure trace here");
    qcmd->add_option("--stats-out", q_stats, "Stats CSV (single row)");

    // ---- digitise ---------------------------------------------------------
    auto* dcmd = app.add_subcommand("digitise", "Slot-digitise a trace");
    std::string d_in, d_format = "bits", d_out = "digitised.txt";
    double d_bits = 464.0, d_bw = 1.96e6;
    std::size_t d_first = 0;
    dcmd->add_option("--in", d_in, "Input trace")->required();
    dcmd->add_option("--format", d_format, "bits|bytes");
    dcmd->add_option("--packet-bits", d_bits, "Packet length l in bits");
    dcmd->add_option("--bandwidth", d_bw, "Bandwidth fixing the slot dt = l/b");
    dcmd->add_option("--first", d_first, "Use only the first N packets");
    dcmd->add_option("--out", d_out, "Output trace (seconds/bits)");

    // ---- sweep (full experiment) ------------------------------------------
    auto* scmd = app.add_subcommand(
        "sweep", "Run the full pipeline: source -> occupancy sweep -> Hurst tables");
    scmd->configurable(true);
    ModelFlags s_model;
    add_model_flags(scmd, s_model, false);
    std::string s_in, s_format = "bits", s_profile;
    std::uint64_t s_seed = 1;
    std::size_t s_slots = 0, s_first = 0, s_warmup = 10000;
    double s_bits = 464.0, s_bw = 1.96e6, s_horizon = 0.0;
    std::vector<double> s_occ{0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5, 0.55, 0.6};
    std::vector<double> s_bins{0.1, 0.01, 0.001};
    scmd->add_option("--in", s_in, "Input trace instead of a model");
    scmd->add_option("--format", s_format, "bits|bytes");
    scmd->add_option("--profile", s_profile, "bellcore|caida defaults");
    scmd->add_option("--seed", s_seed, "RNG seed");
    scmd->add_option("--slots", s_slots, "Slots to generate");
    scmd->add_option("--first", s_first, "First N packets of --in");
    scmd->add_option("--warmup", s_warmup, "Warm-up slots discarded");
    scmd->add_option("--packet-bits", s_bits, "Packet length l");
    scmd->add_option("--bandwidth", s_bw, "Baseline bandwidth b");
    scmd->add_option("--horizon", s_horizon, "Trace length in seconds");
    scmd->add_option("--occupancies", s_occ, "Comma-separated sweep targets")
        ->delimiter(',');
    scmd->add_option("--bins", s_bins, "Comma-separated Hurst bin widths (s)")
        ->delimiter(',');

    // ---- hurst ------------------------------------------------------------
    auto* hcmd = app.add_subcommand("hurst", "Estimate Hurst parameters of a trace");
    std::string h_in, h_format = "bits", h_out = "hurst.csv";
    std::vector<double> h_bins{0.1, 0.01, 0.001};
    std::size_t h_first = 0;
    hcmd->add_option("--in", h_in, "Input trace")->required();
    hcmd->add_option("--format", h_format, "bits|bytes");
    hcmd->add_option("--bins", h_bins, "Comma-separated bin widths (s)")->delimiter(',');
    hcmd->add_option("--first", h_first, "Use only the first N packets");
    hcmd->add_option("--out", h_out, "Output CSV");

    // ---- psst-tail --------------------------------------------------------
    auto* pcmd = app.add_subcommand("psst-tail", "Exact PSST return-time tail tables");
    double p_a = 20.8, p_q = 10.4, p_eps = -1.0;
    long p_n = 0, p_kmax = 1000, p_klo = 0;
    std::size_t p_points = 257;
    std::string p_out = "psst_tail.csv";
    pcmd->add_option("--a", p_a, "a parameter (> 2)");
    pcmd->add_option("--q", p_q, "q parameter (1 < q < a)");
    pcmd->add_option("--n", p_n, "Finite chain size (0 = infinite)");
    pcmd->add_option("--k-max", p_kmax, "Largest k");
    pcmd->add_option("--k-lo", p_klo, "Smallest k (probe mode)");
    pcmd->add_option("--probe-eps", p_eps, "Heavy-tail probe epsilon (enables probe mode)");
    pcmd->add_option("--max-points", p_points, "Table points cap");
    pcmd->add_option("--out", p_out, "Output CSV");

    // ---- compare ----------------------------------------------------------
    auto* ccmd = app.add_subcommand("compare", "Merge sweep CSVs side by side");
    std::vector<std::string> c_in;
    std::string c_labels, c_out = "compare.csv";
    ccmd->add_option("--in", c_in, "Sweep CSV files (>= 2)")->required()->expected(-2);
    ccmd->add_option("--labels", c_labels, "Comma-separated column labels");
    ccmd->add_option("--out", c_out, "Merged CSV");

    // ---- segments ---------------------------------------------------------
    auto* segcmd = app.add_subcommand("segments", "Per-segment occupancy sweeps");
    std::string seg_in, seg_format = "bits";
    std::size_t seg_packets = 100000, seg_first = 0;
    double seg_bw = 1.96e6;
    std::vector<double> seg_occ{0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5, 0.55, 0.6};
    segcmd->add_option("--in", seg_in, "Input trace")->required();
    segcmd->add_option("--format", seg_format, "bits|bytes");
    segcmd->add_option("--segment-packets", seg_packets, "Packets per segment");
    segcmd->add_option("--first", seg_first, "Use only the first N packets");
    segcmd->add_option("--bandwidth", seg_bw, "Baseline bandwidth");
    segcmd->add_option("--occupancies", seg_occ, "Comma-separated sweep targets")
        ->delimiter(',');

    // let subcommands see the global --out-dir wherever it appears
    for (CLI::App* sub : app.get_subcommands([](const CLI::App*) { return true; }))
        sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);  // prints help or the parse error
        return rc == 0 ? 0 : 1;
    }
    std::filesystem::create_directories(out_dir);
    const auto in_out_dir = [&](const std::string& name) {
        return (std::filesystem::path(out_dir) / name).string();
    };

    if (gen->parsed()) {
        const auto model = make_model(gen_model, gen_bits, gen_bw);
        lrd::BinarySeries series;
        if (gen_packets > 0) {
            // grow until the packet budget is met, then cut after the last one
            std::size_t n = gen_slots > 0 ? gen_slots : gen_packets * 4;
            for (;;) {
                series = lrd::generate(model, n, gen_seed, gen_warmup);
                if (series.ones() >= gen_packets) break;
                n *= 2;
            }
            std::size_t seen = 0, cut = series.length();
            for (std::size_t i = 0; i < series.length(); ++i) {
                if (series.values[i] && ++seen == gen_packets) {
                    cut = i + 1;
                    break;
                }
            }
            series.values.resize(cut);
        } else {
            if (gen_slots == 0) throw CLI::ValidationError("need --slots or --packets");
            series = lrd::generate(model, gen_slots, gen_seed, gen_warmup);
        }
        lrd::write_binary_series(series, in_out_dir(gen_out));
        if (!gen_trace_out.empty()) {
            const auto cfg = lrd::DigitiserConfig::from_bandwidth(gen_bits, gen_bw);
            lrd::save_trace(lrd::binary_to_trace(series, cfg), in_out_dir(gen_trace_out),
                            lrd::TraceFormat::SecondsBits);
        }
        std::cout << "series: " << series.length() << " slots, " << series.ones()
                  << " packets, mean " << series.mean() << "\n";
        return 0;
    }

    if (qcmd->parsed()) {
        auto trace = lrd::load_trace(q_in, parse_format(q_format),
                                     q_first ? std::optional<std::size_t>(q_first)
                                             : std::nullopt);
        const double horizon = q_horizon > 0.0
                                   ? q_horizon
                                   : trace.last_arrival() + trace.total_bits() / q_bw;
        const auto result = lrd::simulate_queue(trace, lrd::QueueConfig{q_bw}, horizon);
        std::vector<lrd::SweepRow> row{{result.stats.occupancy, q_bw, result.stats}};
        lrd::write_sweep_csv(row, in_out_dir(q_stats));
        if (!q_departures.empty())
            lrd::save_trace(result.departures, in_out_dir(q_departures),
                            lrd::TraceFormat::SecondsBits);
        std::cout << "mean queue: " << result.stats.mean_q_packets << " packets, "
                  << result.stats.mean_q_bits << " bits; occupancy "
                  << result.stats.occupancy << "\n";
        return 0;
    }

    if (dcmd->parsed()) {
        auto trace = lrd::load_trace(d_in, parse_format(d_format),
                                     d_first ? std::optional<std::size_t>(d_first)
                                             : std::nullopt);
        const auto cfg = lrd::DigitiserConfig::from_bandwidth(d_bits, d_bw);
        const auto out = lrd::digitise(trace, cfg);
        lrd::save_trace(out, in_out_dir(d_out), lrd::TraceFormat::SecondsBits);
        std::cout << "digitised: " << out.records.size() << " packets of " << d_bits
                  << " bits at dt = " << cfg.slot_dt << " s\n";
        return 0;
    }

    if (scmd->parsed()) {
        lrd::ExperimentConfig cfg;
        if (!s_profile.empty()) lrd::apply_profile(cfg, s_profile);
        if (scmd->count("--packet-bits") || s_profile.empty()) cfg.packet_bits = s_bits;
        if (scmd->count("--bandwidth") || s_profile.empty()) cfg.baseline_bandwidth = s_bw;
        if (scmd->count("--horizon")) cfg.horizon_seconds = s_horizon;
        if (scmd->count("--bins") || s_profile.empty()) cfg.hurst_bin_widths = s_bins;
        cfg.occupancies = s_occ;
        cfg.seed = s_seed;
        cfg.slots = s_slots;
        cfg.warmup = s_warmup;
        cfg.out_dir = out_dir;
        if (!s_in.empty()) {
            cfg.trace_path = s_in;
            cfg.trace_format = parse_format(s_format);
            if (s_first) cfg.first_n = s_first;
        } else if (!s_model.model.empty()) {
            cfg.model = make_model(s_model, cfg.packet_bits, cfg.baseline_bandwidth);
            cfg.model_name = s_model.model;
        }
        const auto bundle = lrd::run_experiment(cfg);
        for (const auto& f : bundle.files_written) std::cout << f << "\n";
        return 0;
    }

    if (hcmd->parsed()) {
        auto trace = lrd::load_trace(h_in, parse_format(h_format),
                                     h_first ? std::optional<std::size_t>(h_first)
                                             : std::nullopt);
        std::vector<lrd::HurstRow> rows;
        for (double w : h_bins) {
            const auto binned = lrd::bin_series(trace, w);
            const auto report = lrd::estimate_all(binned);
            for (const auto& [method, est] : report.estimates)
                rows.push_back({h_in, w, method, true, est, ""});
            for (const auto& [method, why] : report.failures)
                rows.push_back({h_in, w, method, false, {}, why});
        }
        lrd::write_hurst_csv(rows, in_out_dir(h_out));
        std::cout << in_out_dir(h_out) << "\n";
        return 0;
    }

    if (pcmd->parsed()) {
        const mpq_class a_q(p_a), q_q(p_q);
        if (p_eps >= 0.0) {
            const auto pts = lrd::heavy_tail_probe(
                a_q, q_q, p_eps, p_klo, p_kmax,
                p_n > 0 ? std::optional<long>(p_n) : std::nullopt);
            std::ofstream out(in_out_dir(p_out));
            out << "k,probe,log10_tail\n";
            char buf[64];
            for (const auto& pt : pts) {
                std::snprintf(buf, sizeof buf, "%ld,%.12g,%.12g\n", pt.k, pt.probe,
                              pt.log10_tail);
                out << buf;
            }
        } else if (p_n > 0) {
            const auto sweep = lrd::return_tail_finite_sweep(a_q, q_q, p_n, p_kmax);
            std::ofstream out(in_out_dir(p_out));
            out << "k,tail,log10_k,log10_tail\n";
            char buf[64];
            for (long k = 0; k <= p_kmax; ++k) {
                const auto& t = sweep[static_cast<std::size_t>(k)];
                out << k << ',' << t.decimal() << ',';
                if (k == 0) out << "-inf";
                else {
                    std::snprintf(buf, sizeof buf, "%.12g",
                                  std::log10(static_cast<double>(k)));
                    out << buf;
                }
                std::snprintf(buf, sizeof buf, ",%.12g\n", lrd::log10_mpq(t.value));
                out << buf;
            }
        } else {
            const auto rows = lrd::loglog_table(a_q, q_q, p_kmax, p_points);
            lrd::write_loglog_csv(rows, in_out_dir(p_out));
        }
        std::cout << in_out_dir(p_out) << "\n";
        return 0;
    }

    if (ccmd->parsed()) {
        std::vector<std::string> labels;
        if (!c_labels.empty()) {
            std::stringstream ss(c_labels);
            std::string item;
            while (std::getline(ss, item, ',')) labels.push_back(item);
        }
        if (!labels.empty() && labels.size() != c_in.size())
            throw CLI::ValidationError("--labels count must match --in count");
        std::vector<lrd::LabelledSweep> sweeps;
        for (std::size_t i = 0; i < c_in.size(); ++i) {
            const std::string label =
                labels.empty() ? std::filesystem::path(c_in[i]).stem().string() : labels[i];
            sweeps.push_back({label, lrd::read_sweep_csv(c_in[i])});
        }
        lrd::write_compare_csv(sweeps, in_out_dir(c_out));
        std::cout << in_out_dir(c_out) << "\n";
        return 0;
    }

    if (segcmd->parsed()) {
        auto trace = lrd::load_trace(seg_in, parse_format(seg_format),
                                     seg_first ? std::optional<std::size_t>(seg_first)
                                               : std::nullopt);
        const auto segs = lrd::segment_analysis(trace, seg_packets, seg_occ, seg_bw);
        lrd::write_segments_csv(segs, out_dir);
        std::cout << out_dir << "/segments_summary.csv (" << segs.size()
                  << " segments)\n";
        return 0;
    }

    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const CLI::Error& e) {
        std::cerr << e.what() << "\n";
        return e.get_name() == "CallForHelp" ? 0 : 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
