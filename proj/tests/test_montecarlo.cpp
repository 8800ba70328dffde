#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "lrd/exact_tail.hpp"
#include "lrd/math_util.hpp"
#include "lrd/models.hpp"
#include "lrd/hurst.hpp"
#include "lrd/queue.hpp"
#include "test_helpers.hpp"

using namespace lrd;

TEST_CASE("mc: cd ones-run law matches the transition tail") {
    // runs regenerate independently, so per-run statistics carry honest
    // binomial errors
    const CleggDodsonParams p(0.906, 0.4);
    const auto series = generate(p, 1000000, 404);
    const auto hist = run_length_histograms(series);
    double total = 0.0;
    for (double c : hist.ones) total += c;
    REQUIRE(total > 10000);
    const double c = (1.0 - p.pi0) / p.pi0;
    const double norm = c * (1.0 - std::pow(2.0, -p.alpha));  // P(jump >= 1)
    for (long k = 2; k <= 8; ++k) {
        // P(run >= k) = tail(k)/tail(1)
        const double kk = static_cast<double>(k);
        const double tail =
            c * (std::pow(kk, -p.alpha) - std::pow(kk + 1.0, -p.alpha)) / norm;
        double observed = 0.0;
        for (std::size_t j = static_cast<std::size_t>(k); j < hist.ones.size(); ++j)
            observed += hist.ones[j];
        observed /= total;
        const double se = std::sqrt(tail * (1.0 - tail) / total);
        INFO("k=", k, " observed=", observed, " expected=", tail);
        CHECK(std::fabs(observed - tail) < 4.0 * se);
    }
}

TEST_CASE("mc: cd window frequency matches the equilibrium tail") {
    // fraction of slots opening a >= k ones window equals (1-pi0) k^-alpha;
    // errors estimated by batch means because slots are correlated
    const CleggDodsonParams p(0.7, 0.6);
    const std::size_t n = 1000000;
    const auto series = generate(p, n, 711);
    for (long k : {1L, 2L, 3L}) {
        std::vector<double> window(n - static_cast<std::size_t>(k) + 1);
        for (std::size_t i = 0; i < window.size(); ++i) {
            bool all = true;
            for (long j = 0; j < k; ++j)
                if (!series.values[i + static_cast<std::size_t>(j)]) {
                    all = false;
                    break;
                }
            window[i] = all ? 1.0 : 0.0;
        }
        double mean = 0.0;
        for (double v : window) mean += v;
        mean /= static_cast<double>(window.size());
        const double expected = cd_equilibrium_tail(p, k);
        const double se = test_util::batch_se(window);
        INFO("k=", k, " mean=", mean, " expected=", expected, " se=", se);
        CHECK(std::fabs(mean - expected) < 3.5 * se);
    }
}

TEST_CASE("mc: wang sample mean approaches the closed form") {
    const WangParams p(0.5, 0.5);
    const auto series = generate(p, 1000000, 52);
    const auto x = test_util::to_doubles(series);
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(x.size());
    const double se = test_util::batch_se(x);
    CHECK(std::fabs(mean - wang_mean(p)) < 3.5 * se);
}

TEST_CASE("mc: ab on-fraction and refit round trip") {
    // power-ish gap law, short train law
    std::vector<double> gap_pmf(21, 0.0);
    double acc = 0.0;
    for (std::size_t k = 1; k <= 20; ++k) {
        gap_pmf[k] = std::pow(static_cast<double>(k), -2.1);
        acc += gap_pmf[k];
    }
    for (auto& v : gap_pmf) v /= acc;
    gap_pmf[1] += 1.0 - std::accumulate(gap_pmf.begin(), gap_pmf.end(), 0.0);
    const DiscreteDistribution gaps(gap_pmf);
    const DiscreteDistribution trains({0.0, 0.3, 0.5, 0.2});
    const ArrowsmithBarencoParams p(gaps, trains);

    const std::size_t n = 1000000;
    const auto series = generate(p, n, 88);
    const auto x = test_util::to_doubles(series);
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(n);
    const double se = test_util::batch_se(x);
    INFO("mean=", mean, " expected=", ab_mean(p), " se=", se);
    CHECK(std::fabs(mean - ab_mean(p)) < 3.5 * se);

    // refit from the generated run lengths; means agree within MC noise
    const auto hist = run_length_histograms(series);
    const auto refit = ab_fit_from_empirical(hist.ones, hist.zeros);
    CHECK(refit.on_lengths.mean() == doctest::Approx(trains.mean()).epsilon(0.02));
    CHECK(refit.off_lengths.mean() == doctest::Approx(gaps.mean()).epsilon(0.02));
    CHECK(ab_mean(refit) == doctest::Approx(ab_mean(p)).epsilon(0.02));

    // regenerate from the refit; run-length histograms stay consistent
    const auto series2 = generate(refit, n, 89);
    const auto hist2 = run_length_histograms(series2);
    double runs1 = 0.0, runs2 = 0.0;
    for (double v : hist.ones) runs1 += v;
    for (double v : hist2.ones) runs2 += v;
    for (std::size_t k = 1; k <= 3; ++k) {
        const double f1 = hist.ones[k] / runs1;
        const double f2 = hist2.ones[k] / runs2;
        CHECK(std::fabs(f1 - f2) < 5.0 * std::sqrt(f1 * (1 - f1) / runs2));
    }
}

TEST_CASE("mc: ab correlation decay follows beta = min(alphaL, alphaR)") {
    // pmf ~ k^-(alpha+1) gives sojourn tails ~ k^-alpha.  A decay exponent
    // beta shows up as Hurst parameter H = 1 - beta/2, which the
    // aggregated-variance estimator reads off far more stably than a raw
    // log-log fit of the empirical acf (the acf has no clean asymptotic
    // window at this scale: lags below the mean run are flat, lags near
    // the support truncation fall off too fast).
    const auto power_pmf = [](double alpha, std::size_t kmax) {
        std::vector<double> pmf(kmax + 1, 0.0);
        double acc = 0.0;
        for (std::size_t k = 1; k <= kmax; ++k) {
            pmf[k] = std::pow(static_cast<double>(k), -(alpha + 1.0));
            acc += pmf[k];
        }
        for (auto& v : pmf) v /= acc;
        const double total = std::accumulate(pmf.begin(), pmf.end(), 0.0);
        pmf[1] += 1.0 - total;
        return DiscreteDistribution(pmf);
    };
    const std::size_t n = 10000000;
    const double beta =
        ab_acf_asymptote(0.6, 0.4, 1.0, 1.0, 0.5, 4.0).beta;  // min rule: 0.4
    CHECK(beta == doctest::Approx(0.4));
    const double expected_h = 1.0 - beta / 2.0;

    // heavy right tail, then the mirrored pair: min(...) is side-blind
    for (const auto& [al, ar] :
         std::vector<std::pair<double, double>>{{0.6, 0.4}, {0.4, 0.6}}) {
        const ArrowsmithBarencoParams p(power_pmf(al, 100000), power_pmf(ar, 100000));
        const auto series = generate(p, n, 5150);
        const auto est = estimate(bin_binary(series, 100), HurstMethod::AggVar);
        INFO("alphaL=", al, " alphaR=", ar, " aggvar H=", est.h);
        CHECK(est.h == doctest::Approx(expected_h).epsilon(0.11));
    }

    // light tails for contrast: geometric-ish runs stay near H = 1/2
    const DiscreteDistribution light({0.0, 0.5, 0.3, 0.15, 0.05});
    const ArrowsmithBarencoParams iid_like(light, light);
    const auto series = generate(iid_like, n, 5151);
    const auto est = estimate(bin_binary(series, 100), HurstMethod::AggVar);
    INFO("light tails aggvar H=", est.h);
    CHECK(est.h == doctest::Approx(0.5).epsilon(0.12));
}

TEST_CASE("mc: psst return times match the exact tail one step apart") {
    // printed tail at k equals P(R0 > k+1) for the step-counting chain;
    // the offset is exactly one lag (see the module notes)
    const mpq_class a(3), q(2);
    const PsstParams p(3.0, 2.0, PsstVariant::B);
    const std::size_t reps = 1000000;
    const auto returns = psst_sample_return_times(p, reps, 31337);
    std::vector<double> ccdf(16, 0.0);
    for (auto r : returns)
        for (std::size_t k = 0; k < ccdf.size(); ++k)
            if (r > static_cast<std::int64_t>(k)) ccdf[k] += 1.0;
    for (auto& v : ccdf) v /= static_cast<double>(reps);

    CHECK(ccdf[0] == 1.0);  // P(R > 0) is 1 by definition
    for (long k = 0; k <= 10; ++k) {
        const double exact = return_tail_infinite(a, q, k).to_double();
        const double emp = ccdf[static_cast<std::size_t>(k) + 1];
        const double se = std::sqrt(exact * (1.0 - exact) / static_cast<double>(reps));
        INFO("k=", k, " emp(k+1)=", emp, " exact=", exact);
        CHECK(std::fabs(emp - exact) < 3.5 * se);
    }
}

TEST_CASE("mc: psst on-fraction at moderate parameters") {
    const PsstParams p(20.0, 2.5, PsstVariant::B);
    const std::size_t n = 1000000;
    const auto series = generate(p, n, 60601);
    const double mean = series.mean();
    const double expected = psst_mean(p);
    const auto x = test_util::to_doubles(series);
    const double se = test_util::batch_se(x);
    CHECK(std::fabs(mean - expected) < 3.5 * se);
}

TEST_CASE("mc: discrete-slot bernoulli queue approaches Pollaczek-Khinchin") {
    // slot width 1, packet 1 bit, arrival probability 0.05, bandwidth
    // 0.1 bps -> deterministic 10-slot service, rho = 0.5
    const std::size_t n = 1000000;
    const auto series = bernoulli_generate(BernoulliParams(0.05), n, 777);
    const auto trace = binary_to_trace(series, DigitiserConfig{1.0, 1.0});
    const double rho = 0.5;
    const double b = trace.total_bits() / (rho * trace.duration);
    const auto r = simulate_queue(trace, QueueConfig{b}, trace.duration);
    const double expected = pk_expected_queue(rho);
    INFO("mean_q=", r.stats.mean_q_packets, " pk=", expected);
    CHECK(std::fabs(r.stats.mean_q_packets - expected) < 0.1 * expected);
}

TEST_CASE("mc: higher fgn hurst gives larger queues at equal mean") {
    const std::size_t n = 1000000;
    const auto low = generate(FgnParams(0.6, 0.094), n, 111);
    const auto high = generate(FgnParams(0.9, 0.094), n, 111);
    const DigitiserConfig cfg{464.0, 1.0};
    const auto t_low = binary_to_trace(low, cfg);
    const auto t_high = binary_to_trace(high, cfg);
    const auto s_low = occupancy_sweep(t_low, {0.5});
    const auto s_high = occupancy_sweep(t_high, {0.5});
    CHECK(s_high[0].stats.mean_q_packets > s_low[0].stats.mean_q_packets);
}

TEST_CASE("mc: fgn on/off sample mean near the target") {
    const auto s = generate(FgnParams(0.8, 0.094), 1000000, 424242);
    CHECK(std::fabs(s.mean() - 0.094) < 0.01);
}
