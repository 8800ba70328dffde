#include "lrd/models.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lrd/fgn.hpp"
#include "lrd/math_util.hpp"
#include "lrd/rng.hpp"

namespace lrd {

namespace {

// Draws K >= 1 with P(K >= k) proportional to tail(k), tail strictly
// decreasing.  Works entirely on conditional probabilities
// P(K in [lo, mid) | K in [lo, hi)), so the absolute tail values never
// matter and arbitrarily deep excursions sample without underflow:
// first locate the octave [2^m, 2^(m+1)), then bisect inside it.
template <typename TailFn>
std::int64_t sample_power_tail(RandomSource& rng, TailFn&& tail) {
    std::int64_t lo = 1;
    for (;;) {
        const double t_lo = tail(lo);
        const double t_hi = tail(2 * lo);
        const double p_in = 1.0 - t_hi / t_lo;
        if (rng.uniform() < p_in) break;
        lo *= 2;
        if (lo > (std::int64_t{1} << 56)) break;  // residual mass ~ 0
    }
    std::int64_t hi = 2 * lo;
    while (hi - lo > 1) {
        const std::int64_t mid = lo + (hi - lo) / 2;
        const double t_lo = tail(lo);
        const double p_left = (t_lo - tail(mid)) / (t_lo - tail(hi));
        if (rng.uniform() < p_left) hi = mid;
        else lo = mid;
    }
    return lo;
}

// Companion-topology walk shared by Wang and Clegg/Dodson: emit a zero for
// each visit to state 0; a jump to height k emits k ones while the chain
// counts back down.
template <typename TailFn>
BinarySeries companion_generate(double f0, TailFn&& tail, std::size_t n,
                                std::uint64_t seed, std::size_t warmup) {
    RandomSource rng(seed);
    const std::size_t total = n + warmup;
    BinarySeries out;
    out.values.resize(total);
    std::size_t t = 0;
    while (t < total) {
        out.values[t++] = 0;  // state 0
        if (t >= total) break;
        if (rng.uniform() < f0) continue;
        std::int64_t k = sample_power_tail(rng, tail);
        while (k-- > 0 && t < total) out.values[t++] = 1;
    }
    if (warmup > 0) out.values.erase(out.values.begin(), out.values.begin() + warmup);
    return out;
}

double wang_tail(const WangParams& p, double k) {
    // sum_{j>=k} f_j = a * k^-(alpha+1), k >= 1 (telescoping)
    return p.a * std::exp(-(p.alpha + 1.0) * std::log(k));
}

double cd_tail(const CleggDodsonParams& p, double k) {
    // sum_{j>=k} f_j = C * (k^-alpha - (k+1)^-alpha), k >= 1
    const double c = (1.0 - p.pi0) / p.pi0;
    return c * std::pow(k, -p.alpha) * -std::expm1(-p.alpha * std::log1p(1.0 / k));
}

}  // namespace

// ---------------------------------------------------------------------------
// Parameter validation
// ---------------------------------------------------------------------------

WangParams::WangParams(double a_, double alpha_) : a(a_), alpha(alpha_) {
    if (!(a > 0.0 && a < 1.0))
        throw std::invalid_argument("WangParams: a must lie in (0,1)");
    if (!(alpha > 0.0)) throw std::invalid_argument("WangParams: alpha must be > 0");
}

CleggDodsonParams::CleggDodsonParams(double pi0_, double alpha_) : pi0(pi0_), alpha(alpha_) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("CleggDodsonParams: alpha must lie in (0,1)");
    if (!(pi0 > 0.0 && pi0 < 1.0))
        throw std::invalid_argument("CleggDodsonParams: pi0 must lie in (0,1)");
    if (!(pi0 > pi0_threshold(alpha)))
        throw std::invalid_argument(
            "CleggDodsonParams: pi0 at or below (2^a-1)/(2^(a+1)-1); "
            "transition row is not a distribution");
}

double CleggDodsonParams::pi0_threshold(double alpha) {
    return (std::pow(2.0, alpha) - 1.0) / (std::pow(2.0, alpha + 1.0) - 1.0);
}

double CleggDodsonParams::f0() const {
    return 1.0 - (1.0 - pi0) / pi0 * (1.0 - std::pow(2.0, -alpha));
}

PsstParams::PsstParams(double a_, double q_, PsstVariant variant_)
    : a(a_), q(q_), variant(variant_) {
    if (!(q > 1.0)) throw std::invalid_argument("PsstParams: q must be > 1");
    if (!(a > q)) throw std::invalid_argument("PsstParams: requires a > q");
    if (!(a > 2.0))
        throw std::invalid_argument("PsstParams: a must be > 2 for the infinite chain");
}

DiscreteDistribution::DiscreteDistribution(std::vector<double> pmf) : pmf_(std::move(pmf)) {
    if (pmf_.size() < 2 || pmf_.size() > kMaxSupport + 1)
        throw std::invalid_argument("DiscreteDistribution: support must be 1..1e6");
    if (pmf_[0] != 0.0)
        throw std::invalid_argument("DiscreteDistribution: pmf[0] must be 0");
    double sum = 0.0;
    for (std::size_t k = 1; k < pmf_.size(); ++k) {
        if (!(pmf_[k] >= 0.0))
            throw std::invalid_argument("DiscreteDistribution: negative mass");
        sum += pmf_[k];
        mean_ += static_cast<double>(k) * pmf_[k];
    }
    if (std::fabs(sum - 1.0) > 1e-12)
        throw std::invalid_argument("DiscreteDistribution: pmf must sum to 1 (tol 1e-12)");
    cdf_.resize(pmf_.size());
    double acc = 0.0;
    for (std::size_t k = 0; k < pmf_.size(); ++k) {
        acc += pmf_[k];
        cdf_[k] = acc;
    }
    cdf_.back() = 1.0;
}

DiscreteDistribution DiscreteDistribution::from_counts(const std::vector<double>& counts) {
    if (counts.size() < 2)
        throw std::invalid_argument("DiscreteDistribution: empty histogram");
    double total = 0.0;
    for (std::size_t k = 1; k < counts.size(); ++k) {
        if (!(counts[k] >= 0.0))
            throw std::invalid_argument("DiscreteDistribution: negative count");
        total += counts[k];
    }
    if (!(total > 0.0)) throw std::invalid_argument("DiscreteDistribution: empty histogram");
    std::vector<double> pmf(counts.size(), 0.0);
    double acc = 0.0;
    for (std::size_t k = 1; k < counts.size(); ++k) {
        pmf[k] = counts[k] / total;
        acc += pmf[k];
    }
    // force exact unit mass onto the largest entry so validation passes
    const auto top = std::max_element(pmf.begin() + 1, pmf.end());
    *top += 1.0 - acc;
    return DiscreteDistribution(std::move(pmf));
}

std::size_t DiscreteDistribution::sample(double u) const {
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    const std::size_t k = static_cast<std::size_t>(it - cdf_.begin());
    return std::min(k, pmf_.size() - 1);
}

FgnParams::FgnParams(double hurst_, double mu_) : hurst(hurst_), mu(mu_) {
    if (!(hurst > 0.5 && hurst < 1.0))
        throw std::invalid_argument("FgnParams: H must lie in (1/2,1)");
    if (!(mu > 0.0 && mu < 1.0))
        throw std::invalid_argument("FgnParams: mu must lie in (0,1)");
}

BernoulliParams::BernoulliParams(double mu_) : mu(mu_) {
    if (!(mu >= 0.0 && mu <= 1.0))
        throw std::invalid_argument("BernoulliParams: mu must lie in [0,1]");
}

// ---------------------------------------------------------------------------
// Closed forms
// ---------------------------------------------------------------------------

double wang_transition_prob(const WangParams& p, long k) {
    if (k < 0) throw std::invalid_argument("wang_transition_prob: k must be >= 0");
    if (k == 0) return 1.0 - p.a;
    const double kk = static_cast<double>(k);
    return p.a / std::pow(kk, p.alpha + 1.0) - p.a / std::pow(kk + 1.0, p.alpha + 1.0);
}

double wang_mean(const WangParams& p) {
    return 1.0 - 1.0 / (1.0 + p.a * riemann_zeta(p.alpha + 1.0));
}

double wang_fit_a(double mu, double alpha) {
    if (!(mu > 0.0 && mu < 1.0)) throw std::invalid_argument("wang_fit_a: mu not in (0,1)");
    if (!(alpha > 0.0)) throw std::invalid_argument("wang_fit_a: alpha must be > 0");
    const double a = mu / (1.0 - mu) / riemann_zeta(alpha + 1.0);
    if (!(a > 0.0 && a < 1.0))
        throw std::domain_error("wang_fit_a: infeasible mean, computed a outside (0,1)");
    return a;
}

double wang_equilibrium(const WangParams& p, long k) {
    if (k < 0) throw std::invalid_argument("wang_equilibrium: k must be >= 0");
    const double pi0 = 1.0 - wang_mean(p);
    if (k == 0) return pi0;
    return pi0 * p.a * std::pow(static_cast<double>(k), -(p.alpha + 1.0));
}

double cd_transition_prob(const CleggDodsonParams& p, long k) {
    if (k < 0) throw std::invalid_argument("cd_transition_prob: k must be >= 0");
    if (k == 0) return p.f0();
    const double c = (1.0 - p.pi0) / p.pi0;
    const double kk = static_cast<double>(k);
    return c * (std::pow(kk, -p.alpha) - 2.0 * std::pow(kk + 1.0, -p.alpha) +
                std::pow(kk + 2.0, -p.alpha));
}

double cd_equilibrium_tail(const CleggDodsonParams& p, long k) {
    if (k < 1) throw std::invalid_argument("cd_equilibrium_tail: k must be >= 1");
    return (1.0 - p.pi0) * std::pow(static_cast<double>(k), -p.alpha);
}

double psst_mean(double q, PsstVariant variant) {
    return variant == PsstVariant::A ? (q - 1.0) / q : 1.0 / q;
}

double psst_mean(const PsstParams& p) { return psst_mean(p.q, p.variant); }

double psst_fit_q(double mu, PsstVariant variant) {
    if (!(mu > 0.0 && mu < 1.0)) throw std::invalid_argument("psst_fit_q: mu not in (0,1)");
    return variant == PsstVariant::A ? 1.0 / (1.0 - mu) : 1.0 / mu;
}

double psst_equilibrium(const PsstParams& p, long k) {
    if (k < 0) throw std::invalid_argument("psst_equilibrium: k must be >= 0");
    const double pi0 = (p.q - 1.0) / p.q;
    return pi0 * std::pow(p.q, -static_cast<double>(k));
}

double ab_mean(const ArrowsmithBarencoParams& p) {
    const double sl = p.off_lengths.mean();
    const double sr = p.on_lengths.mean();
    return sr / (sr + sl);
}

AcfAsymptote ab_acf_asymptote(double alpha_l, double alpha_r, double k_l, double k_r,
                              double mu, double s_total) {
    if (!(alpha_l > 0.0 && alpha_l < 1.0 && alpha_r > 0.0 && alpha_r < 1.0))
        throw std::invalid_argument("ab_acf_asymptote: alphas must lie in (0,1)");
    if (!(k_l > 0.0 && k_r > 0.0))
        throw std::invalid_argument("ab_acf_asymptote: amplitudes must be positive");
    if (!(mu > 0.0 && mu < 1.0) || !(s_total > 0.0))
        throw std::invalid_argument("ab_acf_asymptote: bad mu or S");
    AcfAsymptote out;
    out.beta = std::min(alpha_l, alpha_r);
    if (alpha_r < alpha_l) {
        out.amplitude = k_r * (1.0 - mu) / (s_total * (alpha_r - 1.0) * mu);
    } else if (alpha_l < alpha_r) {
        out.amplitude = k_l * mu / (s_total * (alpha_l - 1.0) * (1.0 - mu));
    } else {
        out.amplitude =
            k_r * (1.0 - mu) * k_l * mu / (mu * (1.0 - mu) * s_total * (alpha_l - 1.0));
        if (!std::isfinite(out.amplitude))
            throw std::domain_error("ab_acf_asymptote: equal-exponent K not finite");
    }
    return out;
}

ArrowsmithBarencoParams ab_fit_from_empirical(const std::vector<double>& train_lengths,
                                              const std::vector<double>& gap_lengths) {
    return ArrowsmithBarencoParams(DiscreteDistribution::from_counts(gap_lengths),
                                   DiscreteDistribution::from_counts(train_lengths));
}

// ---------------------------------------------------------------------------
// Generation
// ---------------------------------------------------------------------------

BinarySeries generate(const WangParams& p, std::size_t n, std::uint64_t seed,
                      std::size_t warmup) {
    return companion_generate(
        1.0 - p.a, [&p](double k) { return wang_tail(p, k); }, n, seed, warmup);
}

BinarySeries generate(const CleggDodsonParams& p, std::size_t n, std::uint64_t seed,
                      std::size_t warmup) {
    return companion_generate(
        p.f0(), [&p](double k) { return cd_tail(p, k); }, n, seed, warmup);
}

BinarySeries generate(const PsstParams& p, std::size_t n, std::uint64_t seed,
                      std::size_t warmup) {
    RandomSource rng(seed);
    const std::size_t total = n + warmup;
    const double sigma0 = 1.0 - 1.0 / (p.a - 1.0);
    const double log_a = std::log(p.a);
    const std::uint8_t zero_symbol = (p.variant == PsstVariant::A) ? 1 : 0;
    const std::uint8_t busy_symbol = static_cast<std::uint8_t>(1 - zero_symbol);

    BinarySeries out;
    out.values.resize(total);
    std::size_t t = 0;
    while (t < total) {
        out.values[t++] = zero_symbol;  // state 0
        if (t >= total) break;
        if (rng.uniform() < sigma0) continue;
        // jump to state i >= 1: P(I > m | jump) = a^-m
        const double v = rng.uniform_open();
        double fi = std::ceil(std::log(1.0 / v) / log_a);
        const std::int64_t remaining = static_cast<std::int64_t>(total - t);
        std::int64_t i = (fi < 1.0) ? 1 : static_cast<std::int64_t>(std::min(fi, 1e18));
        // sojourn at state i: leaves with probability (q/a)^i each step
        const double p_leave = std::exp(static_cast<double>(i) * std::log(p.q / p.a));
        std::int64_t g = sample_geometric(rng, p_leave, remaining);
        while (g-- > 0) out.values[t++] = busy_symbol;
    }
    if (warmup > 0) out.values.erase(out.values.begin(), out.values.begin() + warmup);
    return out;
}

BinarySeries generate(const ArrowsmithBarencoParams& p, std::size_t n, std::uint64_t seed,
                      std::size_t warmup) {
    RandomSource rng(seed);
    const std::size_t total = n + warmup;
    const double sl = p.off_lengths.mean();
    const double sr = p.on_lengths.mean();
    BinarySeries out;
    out.values.resize(total);
    std::size_t t = 0;
    // stationary-ish start: side chosen by expected sojourn share
    bool on_side = rng.uniform() < sr / (sl + sr);
    while (t < total) {
        const DiscreteDistribution& dist = on_side ? p.on_lengths : p.off_lengths;
        std::size_t run = dist.sample(rng.uniform_open());
        const std::uint8_t sym = on_side ? 1 : 0;
        while (run-- > 0 && t < total) out.values[t++] = sym;
        on_side = !on_side;
    }
    if (warmup > 0) out.values.erase(out.values.begin(), out.values.begin() + warmup);
    return out;
}

BinarySeries generate(const BernoulliParams& p, std::size_t n, std::uint64_t seed,
                      std::size_t warmup) {
    RandomSource rng(seed);
    const std::size_t total = n + warmup;
    BinarySeries out;
    out.values.resize(total);
    for (std::size_t t = 0; t < total; ++t)
        out.values[t] = rng.uniform() < p.mu ? 1 : 0;
    if (warmup > 0) out.values.erase(out.values.begin(), out.values.begin() + warmup);
    return out;
}

BinarySeries bernoulli_generate(const BernoulliParams& p, std::size_t n, std::uint64_t seed) {
    return generate(p, n, seed, 0);
}

BinarySeries generate(const FgnParams& p, std::size_t n, std::uint64_t seed,
                      std::size_t warmup) {
    return fgn_onoff_generate(p, n + warmup, seed, warmup);
}

BinarySeries generate(const ModelParams& p, std::size_t n, std::uint64_t seed,
                      std::size_t warmup) {
    return std::visit([&](const auto& params) { return generate(params, n, seed, warmup); },
                      p);
}

std::vector<double> psst_state_occupancy(const PsstParams& p, std::size_t n,
                                         std::uint64_t seed, std::size_t max_state) {
    RandomSource rng(seed);
    const double sigma0 = 1.0 - 1.0 / (p.a - 1.0);
    const double log_a = std::log(p.a);
    const double log_qa = std::log(p.q / p.a);
    std::vector<double> counts(max_state + 1, 0.0);
    std::size_t t = 0;
    while (t < n) {
        counts[0] += 1.0;
        ++t;
        if (t >= n) break;
        if (rng.uniform() < sigma0) continue;
        const double v = rng.uniform_open();
        double fi = std::ceil(std::log(1.0 / v) / log_a);
        const std::int64_t remaining = static_cast<std::int64_t>(n - t);
        const std::int64_t i =
            (fi < 1.0) ? 1 : static_cast<std::int64_t>(std::min(fi, 1e18));
        const double p_leave = std::exp(static_cast<double>(i) * log_qa);
        const std::int64_t g = sample_geometric(rng, p_leave, remaining);
        const std::size_t bucket =
            std::min<std::size_t>(static_cast<std::size_t>(i), max_state);
        counts[bucket] += static_cast<double>(g);
        t += static_cast<std::size_t>(g);
    }
    return counts;
}

std::vector<std::int64_t> psst_sample_return_times(const PsstParams& p, std::size_t count,
                                                   std::uint64_t seed) {
    RandomSource rng(seed);
    const double sigma0 = 1.0 - 1.0 / (p.a - 1.0);
    const double log_a = std::log(p.a);
    const double log_qa = std::log(p.q / p.a);
    std::vector<std::int64_t> out;
    out.reserve(count);
    constexpr std::int64_t cap = std::int64_t{1} << 60;
    for (std::size_t r = 0; r < count; ++r) {
        if (rng.uniform() < sigma0) {
            out.push_back(1);  // stayed at 0: returned on the first step
            continue;
        }
        const double v = rng.uniform_open();
        double fi = std::ceil(std::log(1.0 / v) / log_a);
        const std::int64_t i = (fi < 1.0) ? 1 : static_cast<std::int64_t>(std::min(fi, 1e18));
        const double p_leave = std::exp(static_cast<double>(i) * log_qa);
        out.push_back(1 + sample_geometric(rng, p_leave, cap));
    }
    return out;
}

}  // namespace lrd
