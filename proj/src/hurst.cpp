#include "lrd/hurst.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "lrd/fft.hpp"
#include "lrd/math_util.hpp"

namespace lrd {

BinnedSeries bin_series(const PacketTrace& trace, double bin_width) {
    if (trace.empty()) throw std::invalid_argument("bin_series: empty trace");
    if (!(bin_width > 0.0)) throw std::invalid_argument("bin_series: bin_width must be > 0");
    const double duration = trace.duration > 0.0 ? trace.duration : trace.last_arrival();
    std::size_t nbins = static_cast<std::size_t>(std::ceil(duration / bin_width));
    if (nbins < 1) nbins = 1;
    BinnedSeries out;
    out.bin_width = bin_width;
    out.counts.assign(nbins, 0.0);
    for (const auto& r : trace.records) {
        std::size_t i = static_cast<std::size_t>(r.time / bin_width);
        if (i >= nbins) i = nbins - 1;  // arrival exactly at the window end
        out.counts[i] += r.bits;
    }
    return out;
}

BinnedSeries bin_binary(const BinarySeries& series, std::size_t slots_per_bin) {
    if (series.values.empty()) throw std::invalid_argument("bin_binary: empty series");
    if (slots_per_bin == 0) throw std::invalid_argument("bin_binary: zero bin size");
    BinnedSeries out;
    out.bin_width = static_cast<double>(slots_per_bin);
    const std::size_t nbins = (series.values.size() + slots_per_bin - 1) / slots_per_bin;
    out.counts.assign(nbins, 0.0);
    for (std::size_t i = 0; i < series.values.size(); ++i)
        out.counts[i / slots_per_bin] += series.values[i];
    return out;
}

const char* hurst_method_name(HurstMethod m) {
    switch (m) {
        case HurstMethod::RS: return "rs";
        case HurstMethod::AggVar: return "aggvar";
        case HurstMethod::Periodogram: return "periodogram";
        case HurstMethod::Wavelet: return "wavelet";
        case HurstMethod::LocalWhittle: return "local_whittle";
    }
    return "?";
}

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

void check_series(const BinnedSeries& s) {
    if (s.counts.size() < 256)
        throw std::invalid_argument("hurst: series shorter than 256 points");
    const double first = s.counts.front();
    for (double v : s.counts)
        if (v != first) return;
    throw std::invalid_argument("hurst: constant series has no Hurst parameter");
}

std::vector<double> demeaned(const std::vector<double>& x) {
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(x.size());
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] - mean;
    return out;
}

// Geometric grid of block sizes in [lo, hi].
std::vector<std::size_t> block_sizes(std::size_t lo, std::size_t hi, int per_decade) {
    std::vector<std::size_t> out;
    if (lo > hi) return out;
    const double ratio = std::pow(10.0, 1.0 / per_decade);
    double m = static_cast<double>(lo);
    std::size_t prev = 0;
    while (m <= static_cast<double>(hi) * 1.0000001) {
        std::size_t mi = static_cast<std::size_t>(std::llround(m));
        if (mi > hi) break;
        if (mi != prev) out.push_back(mi);
        prev = mi;
        m *= ratio;
    }
    if (!out.empty() && out.back() != hi) out.push_back(hi);
    return out;
}

HurstEstimate estimate_rs(const BinnedSeries& series, const HurstOptions& opt) {
    const auto& x = series.counts;
    const std::size_t n = x.size();
    const std::size_t lo = static_cast<std::size_t>(opt.min_block);
    const std::size_t hi = static_cast<std::size_t>(
        static_cast<double>(n) / opt.min_blocks_per_size);
    auto sizes = block_sizes(lo, hi, opt.sizes_per_decade);

    std::vector<double> log_m, log_rs;
    for (std::size_t m : sizes) {
        const std::size_t blocks = n / m;
        double sum_rs = 0.0;
        std::size_t used = 0;
        for (std::size_t bidx = 0; bidx < blocks; ++bidx) {
            const double* blk = x.data() + bidx * m;
            double mean = 0.0;
            for (std::size_t i = 0; i < m; ++i) mean += blk[i];
            mean /= static_cast<double>(m);
            double cum = 0.0, cmin = 0.0, cmax = 0.0, ss = 0.0;
            for (std::size_t i = 0; i < m; ++i) {
                const double d = blk[i] - mean;
                cum += d;
                cmin = std::min(cmin, cum);
                cmax = std::max(cmax, cum);
                ss += d * d;
            }
            const double s = std::sqrt(ss / static_cast<double>(m));
            if (s > 0.0) {
                sum_rs += (cmax - cmin) / s;
                ++used;
            }
        }
        if (used > 0) {
            log_m.push_back(std::log(static_cast<double>(m)));
            log_rs.push_back(std::log(sum_rs / static_cast<double>(used)));
        }
    }
    if (log_m.size() < 4) throw std::invalid_argument("rs: too few usable block sizes");

    // drop the smallest decade(s) where transient bias dominates, provided
    // enough points survive
    const double cutoff =
        std::log(static_cast<double>(lo)) + opt.rs_fit_exclude_decades * std::log(10.0);
    std::vector<double> fx, fy;
    for (std::size_t i = 0; i < log_m.size(); ++i)
        if (log_m[i] >= cutoff) {
            fx.push_back(log_m[i]);
            fy.push_back(log_rs[i]);
        }
    if (fx.size() < 4) {
        fx = log_m;
        fy = log_rs;
    }
    const LinearFit fit = linear_fit(fx, fy);
    HurstEstimate est;
    est.method = HurstMethod::RS;
    est.h = fit.slope;
    est.fit_lo = std::exp(fx.front());
    est.fit_hi = std::exp(fx.back());
    est.slope = fit.slope;
    est.residual = fit.residual_rms;
    return est;
}

HurstEstimate estimate_aggvar(const BinnedSeries& series, const HurstOptions& opt) {
    const auto& x = series.counts;
    const std::size_t n = x.size();
    const std::size_t lo = static_cast<std::size_t>(opt.min_block);
    const std::size_t hi = static_cast<std::size_t>(
        static_cast<double>(n) / opt.min_blocks_per_size);
    auto sizes = block_sizes(lo, hi, opt.sizes_per_decade);

    std::vector<double> log_m, log_var;
    for (std::size_t m : sizes) {
        const std::size_t blocks = n / m;
        if (blocks < 2) continue;
        std::vector<double> means(blocks);
        for (std::size_t bidx = 0; bidx < blocks; ++bidx) {
            double s = 0.0;
            const double* blk = x.data() + bidx * m;
            for (std::size_t i = 0; i < m; ++i) s += blk[i];
            means[bidx] = s / static_cast<double>(m);
        }
        double mm = 0.0;
        for (double v : means) mm += v;
        mm /= static_cast<double>(blocks);
        double var = 0.0;
        for (double v : means) var += (v - mm) * (v - mm);
        var /= static_cast<double>(blocks - 1);
        if (var > 0.0) {
            log_m.push_back(std::log(static_cast<double>(m)));
            log_var.push_back(std::log(var));
        }
    }
    if (log_m.size() < 4) throw std::invalid_argument("aggvar: too few usable block sizes");
    const LinearFit fit = linear_fit(log_m, log_var);
    HurstEstimate est;
    est.method = HurstMethod::AggVar;
    est.h = 1.0 + fit.slope / 2.0;
    est.fit_lo = std::exp(log_m.front());
    est.fit_hi = std::exp(log_m.back());
    est.slope = fit.slope;
    est.residual = fit.residual_rms;
    return est;
}

// Periodogram ordinates I(lambda_j) for j = 1..nf of the demeaned series.
std::vector<double> periodogram(const std::vector<double>& x) {
    const std::size_t n = x.size();
    std::vector<std::complex<double>> in(n);
    for (std::size_t i = 0; i < n; ++i) in[i] = x[i];
    const auto spec = dft_any(in);
    const std::size_t nf = (n - 1) / 2;
    std::vector<double> out(nf);
    for (std::size_t j = 1; j <= nf; ++j)
        out[j - 1] = std::norm(spec[j]) / (2.0 * kPi * static_cast<double>(n));
    return out;
}

HurstEstimate estimate_periodogram(const BinnedSeries& series, const HurstOptions& opt) {
    const auto x = demeaned(series.counts);
    const std::size_t n = x.size();
    const auto ordinates = periodogram(x);
    const std::size_t nf = ordinates.size();
    const std::size_t m = std::max<std::size_t>(
        4, static_cast<std::size_t>(opt.low_freq_fraction * static_cast<double>(nf)));

    std::vector<double> lx, ly;
    for (std::size_t j = 1; j <= std::min(m, nf); ++j) {
        if (ordinates[j - 1] <= 0.0) continue;
        lx.push_back(std::log(2.0 * kPi * static_cast<double>(j) / static_cast<double>(n)));
        ly.push_back(std::log(ordinates[j - 1]));
    }
    if (lx.size() < 4) throw std::invalid_argument("periodogram: too few usable frequencies");
    const LinearFit fit = linear_fit(lx, ly);
    HurstEstimate est;
    est.method = HurstMethod::Periodogram;
    est.h = (1.0 - fit.slope) / 2.0;
    est.fit_lo = std::exp(lx.front());
    est.fit_hi = std::exp(lx.back());
    est.slope = fit.slope;
    est.residual = fit.residual_rms;
    return est;
}

HurstEstimate estimate_wavelet(const BinnedSeries& series, const HurstOptions& opt) {
    // truncate to a power of two for the pyramid transform
    std::size_t n2 = 1;
    while (n2 * 2 <= series.counts.size()) n2 *= 2;
    std::vector<double> approx(series.counts.begin(),
                               series.counts.begin() + static_cast<long>(n2));

    // Daubechies-2 (two vanishing moments), periodized
    const double s3 = std::sqrt(3.0);
    const double norm = 1.0 / (4.0 * std::sqrt(2.0));
    const double h[4] = {(1 + s3) * norm, (3 + s3) * norm, (3 - s3) * norm, (1 - s3) * norm};
    const double g[4] = {h[3], -h[2], h[1], -h[0]};

    const int levels = static_cast<int>(std::log2(static_cast<double>(n2)));
    std::vector<double> octave, log2_energy, weights;
    std::vector<double> next;
    for (int j = 1; j <= levels && approx.size() >= 4; ++j) {
        const std::size_t half = approx.size() / 2;
        next.assign(half, 0.0);
        double energy = 0.0;
        for (std::size_t k = 0; k < half; ++k) {
            double acc_a = 0.0, acc_d = 0.0;
            for (std::size_t m = 0; m < 4; ++m) {
                const double v = approx[(2 * k + m) % approx.size()];
                acc_a += h[m] * v;
                acc_d += g[m] * v;
            }
            next[k] = acc_a;
            energy += acc_d * acc_d;
        }
        const double mean_energy = energy / static_cast<double>(half);
        if (mean_energy > 0.0) {
            octave.push_back(j);
            log2_energy.push_back(std::log2(mean_energy));
            weights.push_back(static_cast<double>(half));
        }
        approx.swap(next);
    }

    const int top = levels - opt.wavelet_trim_top_octaves;
    std::vector<double> fx, fy, fw;
    for (std::size_t i = 0; i < octave.size(); ++i)
        if (octave[i] >= opt.wavelet_min_octave && octave[i] <= top) {
            fx.push_back(octave[i]);
            fy.push_back(log2_energy[i]);
            fw.push_back(weights[i]);
        }
    if (fx.size() < 2) throw std::invalid_argument("wavelet: too few octaves in fit range");
    const LinearFit fit = weighted_linear_fit(fx, fy, fw);
    HurstEstimate est;
    est.method = HurstMethod::Wavelet;
    est.h = (fit.slope + 1.0) / 2.0;
    est.fit_lo = fx.front();
    est.fit_hi = fx.back();
    est.slope = fit.slope;
    est.residual = fit.residual_rms;
    return est;
}

HurstEstimate estimate_local_whittle(const BinnedSeries& series, const HurstOptions& opt) {
    const auto x = demeaned(series.counts);
    const std::size_t n = x.size();
    const auto ordinates = periodogram(x);
    const std::size_t m = std::min(
        ordinates.size(),
        static_cast<std::size_t>(std::pow(static_cast<double>(n),
                                          opt.whittle_bandwidth_exponent)));
    if (m < 8) throw std::invalid_argument("local_whittle: too few frequencies");

    std::vector<double> lambda(m), log_lambda(m);
    double mean_log_lambda = 0.0;
    for (std::size_t j = 1; j <= m; ++j) {
        lambda[j - 1] = 2.0 * kPi * static_cast<double>(j) / static_cast<double>(n);
        log_lambda[j - 1] = std::log(lambda[j - 1]);
        mean_log_lambda += log_lambda[j - 1];
    }
    mean_log_lambda /= static_cast<double>(m);

    const auto objective = [&](double h) {
        const double two_d = 2.0 * (h - 0.5);
        double acc = 0.0;
        for (std::size_t j = 0; j < m; ++j)
            acc += std::exp(two_d * log_lambda[j]) * ordinates[j];
        acc /= static_cast<double>(m);
        return std::log(acc) - two_d * mean_log_lambda;
    };

    // golden-section over H in (0,1)
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double lo = 0.001, hi = 0.999;
    double c = hi - gr * (hi - lo);
    double d = lo + gr * (hi - lo);
    double fc = objective(c), fd = objective(d);
    while (hi - lo > opt.whittle_tolerance) {
        if (fc < fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - gr * (hi - lo);
            fc = objective(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + gr * (hi - lo);
            fd = objective(d);
        }
    }
    const double h = 0.5 * (lo + hi);
    HurstEstimate est;
    est.method = HurstMethod::LocalWhittle;
    est.h = h;
    est.fit_lo = lambda.front();
    est.fit_hi = lambda.back();
    est.slope = 2.0 * (h - 0.5);  // implied low-frequency spectral slope is -this
    est.residual = objective(h);
    return est;
}

}  // namespace

HurstEstimate estimate(const BinnedSeries& series, HurstMethod method,
                       const HurstOptions& options) {
    check_series(series);
    switch (method) {
        case HurstMethod::RS: return estimate_rs(series, options);
        case HurstMethod::AggVar: return estimate_aggvar(series, options);
        case HurstMethod::Periodogram: return estimate_periodogram(series, options);
        case HurstMethod::Wavelet: return estimate_wavelet(series, options);
        case HurstMethod::LocalWhittle: return estimate_local_whittle(series, options);
    }
    throw std::invalid_argument("estimate: unknown method");
}

HurstReport estimate_all(const BinnedSeries& series, const HurstOptions& options) {
    HurstReport report;
    for (HurstMethod m : {HurstMethod::RS, HurstMethod::AggVar, HurstMethod::Periodogram,
                          HurstMethod::Wavelet, HurstMethod::LocalWhittle}) {
        try {
            report.estimates.emplace(m, estimate(series, m, options));
        } catch (const std::exception& e) {
            report.failures.emplace(m, e.what());
        }
    }
    return report;
}

}  // namespace lrd
