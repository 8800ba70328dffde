#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "lrd/math_util.hpp"
#include "lrd/models.hpp"
#include "test_helpers.hpp"

using namespace lrd;

// ---------------------------------------------------------------------------
// Wang model
// ---------------------------------------------------------------------------

TEST_CASE("wang: parameter validation") {
    CHECK_THROWS_AS(WangParams(0.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(WangParams(1.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(WangParams(0.5, 0.0), std::invalid_argument);
    CHECK_NOTHROW(WangParams(0.5, 1.5));
}

TEST_CASE("wang: transition probabilities") {
    const WangParams p(0.5, 0.5);
    CHECK(wang_transition_prob(p, 0) == doctest::Approx(0.5).epsilon(1e-15));
    // f1 = a (1 - 2^-1.5)
    CHECK(wang_transition_prob(p, 1) ==
          doctest::Approx(0.32322330470336312).epsilon(1e-12));
    CHECK_THROWS_AS(wang_transition_prob(p, -1), std::invalid_argument);

    // telescoping oracle: partial sums reach 1 - a (K+1)^-(alpha+1)
    double sum = wang_transition_prob(p, 0);
    const long big = 1000000;
    for (long k = 1; k <= big; ++k) {
        const double f = wang_transition_prob(p, k);
        CHECK(f >= 0.0);
        sum += f;
    }
    const double expected = 1.0 - p.a * std::pow(static_cast<double>(big) + 1.0, -1.5);
    CHECK(sum == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("wang: mean against zeta series") {
    const WangParams p(0.5, 0.5);
    CHECK(wang_mean(p) == doctest::Approx(0.5663839456235943).epsilon(1e-10));
    // a -> 0 collapses onto the zero state
    CHECK(wang_mean(WangParams(1e-9, 0.5)) < 1e-8);
    // paper occupancy 0.094 with alpha = 0.4
    CHECK(wang_mean(WangParams(0.03340884877768313, 0.4)) ==
          doctest::Approx(0.094).epsilon(1e-10));
}

TEST_CASE("wang: fit and round trip") {
    CHECK(wang_fit_a(0.094, 0.4) == doctest::Approx(0.03340884877768313).epsilon(1e-10));
    // the (0.9, 0.1) pair is feasible: 9/zeta(1.1) < 1
    CHECK(wang_fit_a(0.9, 0.1) == doctest::Approx(0.8503041069926761).epsilon(1e-10));
    CHECK_THROWS_AS(wang_fit_a(0.95, 0.5), std::domain_error);

    for (double mu : {0.05, 0.094, 0.2, 0.4, 0.6}) {
        for (double alpha : {0.3, 0.5, 0.7, 0.9}) {
            const double a = wang_fit_a(mu, alpha);
            CHECK(wang_mean(WangParams(a, alpha)) == doctest::Approx(mu).epsilon(1e-10));
        }
    }
}

TEST_CASE("wang: equilibrium distribution") {
    const WangParams p(0.5, 0.5);
    const double mu = wang_mean(p);
    CHECK(wang_equilibrium(p, 0) == doctest::Approx(1.0 - mu).epsilon(1e-12));
    // tail of the jump law from state 1 is exactly a
    CHECK(wang_equilibrium(p, 1) ==
          doctest::Approx((1.0 - mu) * p.a).epsilon(1e-12));

    // normalization: partial sum plus the analytic remainder equals 1.
    // (A bare 1e5-term partial sum is still ~1.4e-3 short; the remainder
    // decays like K^-alpha, so it must be added explicitly.)
    const long big = 100000;
    double sum = wang_equilibrium(p, 0);
    for (long k = 1; k <= big; ++k) sum += wang_equilibrium(p, k);
    double zeta_partial = 0.0;
    for (long k = big; k >= 1; --k) zeta_partial += std::pow(static_cast<double>(k), -1.5);
    const double tail = (1.0 - mu) * p.a * (riemann_zeta(1.5) - zeta_partial);
    CHECK(sum + tail == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(sum == doctest::Approx(1.0).epsilon(2e-3));
}

// ---------------------------------------------------------------------------
// Clegg/Dodson model
// ---------------------------------------------------------------------------

TEST_CASE("cd: validity boundary") {
    // threshold at alpha=0.4
    const double thr = CleggDodsonParams::pi0_threshold(0.4);
    CHECK(thr == doctest::Approx(0.19493888135354299).epsilon(1e-12));
    CHECK_THROWS_AS(CleggDodsonParams(thr, 0.4), std::invalid_argument);
    CHECK_THROWS_AS(CleggDodsonParams(thr - 0.01, 0.4), std::invalid_argument);
    const CleggDodsonParams just_above(thr + 1e-9, 0.4);
    CHECK(just_above.f0() >= 0.0);
    CHECK_THROWS_AS(CleggDodsonParams(0.5, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(CleggDodsonParams(0.5, 0.0), std::invalid_argument);
}

TEST_CASE("cd: transition probabilities") {
    const CleggDodsonParams p(0.906, 0.4);
    CHECK(cd_transition_prob(p, 0) == doctest::Approx(0.97487712872625685).epsilon(1e-12));
    CHECK(cd_transition_prob(p, 1) == doctest::Approx(0.013350640348658366).epsilon(1e-12));
    CHECK_THROWS_AS(cd_transition_prob(p, -1), std::invalid_argument);

    // row sums to 1: partial sum + telescoped tail
    double sum = 0.0;
    const long big = 10000;
    for (long k = 0; k <= big; ++k) {
        const double f = cd_transition_prob(p, k);
        CHECK(f >= 0.0);
        CHECK(f <= 1.0);
        sum += f;
    }
    const double c = (1.0 - p.pi0) / p.pi0;
    const double kk = static_cast<double>(big) + 1.0;
    const double tail = c * (std::pow(kk, -p.alpha) - std::pow(kk + 1.0, -p.alpha));
    CHECK(sum + tail == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("cd: equilibrium tail") {
    const CleggDodsonParams p(0.9, 0.5);
    CHECK(cd_equilibrium_tail(p, 1) == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(cd_equilibrium_tail(p, 2) == doctest::Approx(0.070710678118654752).epsilon(1e-12));
    CHECK_THROWS_AS(cd_equilibrium_tail(p, 0), std::invalid_argument);

    // tail differences reproduce the per-state probabilities
    for (long k = 1; k < 50; ++k) {
        const double pi_k = (1.0 - p.pi0) * (std::pow(static_cast<double>(k), -p.alpha) -
                                             std::pow(static_cast<double>(k) + 1.0, -p.alpha));
        CHECK(cd_equilibrium_tail(p, k) - cd_equilibrium_tail(p, k + 1) ==
              doctest::Approx(pi_k).epsilon(1e-12));
    }
}

// ---------------------------------------------------------------------------
// PSST model
// ---------------------------------------------------------------------------

TEST_CASE("psst: parameter validation") {
    CHECK_THROWS_AS(PsstParams(2.0, 1.5, PsstVariant::B), std::invalid_argument);  // a <= 2
    CHECK_THROWS_AS(PsstParams(10.0, 0.9, PsstVariant::B), std::invalid_argument);
    CHECK_THROWS_AS(PsstParams(5.0, 6.0, PsstVariant::B), std::invalid_argument);
    CHECK_NOTHROW(PsstParams(500.0, 10.4, PsstVariant::B));
}

TEST_CASE("psst: means and fit") {
    CHECK(psst_mean(10.4, PsstVariant::B) == doctest::Approx(0.09615384615384616).epsilon(1e-12));
    CHECK(psst_mean(10.2, PsstVariant::B) == doctest::Approx(0.09803921568627451).epsilon(1e-12));
    CHECK(psst_mean(2.0, PsstVariant::A) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(psst_fit_q(1.0 / 10.4, PsstVariant::B) == doctest::Approx(10.4).epsilon(1e-12));
    CHECK(psst_fit_q(0.5, PsstVariant::A) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(psst_fit_q(0.094, PsstVariant::A) == doctest::Approx(1.1037527593818985).epsilon(1e-12));
    CHECK(psst_mean(psst_fit_q(0.3, PsstVariant::B), PsstVariant::B) ==
          doctest::Approx(0.3).epsilon(1e-14));
}

TEST_CASE("transition rows are stochastic over states 0..1e4") {
    // Wang and Clegg/Dodson rows above 0 are deterministic (step to k-1);
    // row 0 must telescope to 1.  PSST rows pair the diagonal with the
    // return probability.
    const WangParams wang(0.5, 0.5);
    const CleggDodsonParams cd(0.906, 0.4);
    double wang_sum = 0.0, cd_sum = 0.0;
    const long big = 10000;
    for (long k = 0; k <= big; ++k) {
        wang_sum += wang_transition_prob(wang, k);
        cd_sum += cd_transition_prob(cd, k);
    }
    const double kk = static_cast<double>(big) + 1.0;
    const double wang_tail = wang.a * std::pow(kk, -(wang.alpha + 1.0));
    const double cd_tail = (1.0 - cd.pi0) / cd.pi0 *
                           (std::pow(kk, -cd.alpha) - std::pow(kk + 1.0, -cd.alpha));
    CHECK(wang_sum + wang_tail == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(cd_sum + cd_tail == doctest::Approx(1.0).epsilon(1e-9));

    const PsstParams psst(500.0, 10.4, PsstVariant::B);
    for (long i = 1; i <= big; ++i) {
        const double leave = std::exp(i * std::log(psst.q / psst.a));
        const double stay = 1.0 - leave;
        CHECK(stay >= 0.0);
        CHECK(stay + leave == doctest::Approx(1.0).epsilon(1e-9));
    }
    const double sigma0 = 1.0 - 1.0 / (psst.a - 1.0);
    CHECK(sigma0 + 1.0 / (psst.a - 1.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("psst: equilibrium distribution") {
    const PsstParams p(500.0, 10.4, PsstVariant::B);
    CHECK(psst_equilibrium(PsstParams(3.0, 2.0, PsstVariant::A), 0) ==
          doctest::Approx(0.5).epsilon(1e-15));
    CHECK(psst_equilibrium(p, 2) == doctest::Approx(0.0083565657715066).epsilon(1e-12));

    const PsstParams q2(3.0, 2.0, PsstVariant::A);
    double sum = 0.0;
    for (long k = 0; k <= 200; ++k) sum += psst_equilibrium(q2, k);
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));

    // state rows are stochastic: sigma_i + (q/a)^i = 1 by construction;
    // state 0: sigma_0 + sum_i a^-i = 1 analytically
    const double sigma0 = 1.0 - 1.0 / (p.a - 1.0);
    CHECK(sigma0 + 1.0 / (p.a - 1.0) == doctest::Approx(1.0).epsilon(1e-15));
}

// ---------------------------------------------------------------------------
// Arrowsmith/Barenco model
// ---------------------------------------------------------------------------

TEST_CASE("ab: discrete distribution validation") {
    CHECK_THROWS_AS(DiscreteDistribution({0.0, 0.5, 0.4}), std::invalid_argument);  // sum != 1
    CHECK_THROWS_AS(DiscreteDistribution({0.1, 0.9}), std::invalid_argument);  // pmf[0] != 0
    CHECK_THROWS_AS(DiscreteDistribution({0.0}), std::invalid_argument);
    CHECK_NOTHROW(DiscreteDistribution({0.0, 0.25, 0.75}));
    CHECK(DiscreteDistribution({0.0, 0.25, 0.75}).mean() == doctest::Approx(1.75));
}

TEST_CASE("ab: mean from sojourn times") {
    const DiscreteDistribution at1({0.0, 1.0});
    const DiscreteDistribution at3({0.0, 0.0, 0.0, 1.0});
    CHECK(ab_mean(ArrowsmithBarencoParams(at1, at1)) == doctest::Approx(0.5).epsilon(1e-15));
    // off runs of 3, on runs of 1
    CHECK(ab_mean(ArrowsmithBarencoParams(at3, at1)) == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("ab: fit from empirical histograms") {
    // trains {1: .5, 3: .5}, gaps {1: 1}  =>  S_R = 2, S_L = 1, mu = 2/3
    std::vector<double> trains{0, 1, 0, 1};
    std::vector<double> gaps{0, 7};
    const auto params = ab_fit_from_empirical(trains, gaps);
    CHECK(ab_mean(params) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(params.on_lengths.mean() == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(params.off_lengths.mean() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK_THROWS_AS(ab_fit_from_empirical({}, gaps), std::invalid_argument);
    CHECK_THROWS_AS(ab_fit_from_empirical(trains, {0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("ab: acf asymptote branches") {
    const auto r_smaller = ab_acf_asymptote(0.7, 0.3, 1.0, 1.0, 0.5, 4.0);
    CHECK(r_smaller.beta == doctest::Approx(0.3));
    const auto l_smaller = ab_acf_asymptote(0.3, 0.7, 1.0, 1.0, 0.5, 4.0);
    CHECK(l_smaller.beta == doctest::Approx(0.3));
    const auto equal = ab_acf_asymptote(0.5, 0.5, 1.0, 2.0, 0.25, 4.0);
    CHECK(equal.beta == doctest::Approx(0.5));
    // printed formula: K_R K_L / (S (alpha - 1)) for the equal case
    CHECK(equal.amplitude == doctest::Approx(2.0 / (4.0 * (0.5 - 1.0))).epsilon(1e-12));
    CHECK_THROWS_AS(ab_acf_asymptote(1.2, 0.5, 1, 1, 0.5, 4), std::invalid_argument);
    CHECK_THROWS_AS(ab_acf_asymptote(0.5, 0.5, -1, 1, 0.5, 4), std::invalid_argument);
}

// ---------------------------------------------------------------------------
// Generation
// ---------------------------------------------------------------------------

TEST_CASE("generate: deterministic per (params, n, seed)") {
    const std::size_t n = 5000;
    const WangParams wang(0.5, 0.5);
    CHECK(generate(wang, n, 42).values == generate(wang, n, 42).values);
    const CleggDodsonParams cd(0.7, 0.6);
    CHECK(generate(cd, n, 42).values == generate(cd, n, 42).values);
    const PsstParams psst(20.0, 2.5, PsstVariant::B);
    CHECK(generate(psst, n, 42).values == generate(psst, n, 42).values);
    const BernoulliParams bern(0.3);
    CHECK(generate(bern, n, 42).values == generate(bern, n, 42).values);
    const FgnParams fgn(0.8, 0.3);
    CHECK(generate(fgn, n, 42).values == generate(fgn, n, 42).values);
    // different seed changes the sample path
    CHECK(generate(wang, n, 42).values != generate(wang, n, 43).values);
}

TEST_CASE("generate: warmup is a pure prefix drop") {
    const CleggDodsonParams cd(0.7, 0.6);
    const auto full = generate(cd, 3000, 9, 0);
    const auto trimmed = generate(cd, 2000, 9, 1000);
    CHECK(std::equal(trimmed.values.begin(), trimmed.values.end(),
                     full.values.begin() + 1000));
}

TEST_CASE("generate: length honoured for every model") {
    for (std::size_t n : {1, 7, 1024}) {
        CHECK(generate(WangParams(0.3, 0.7), n, 1).length() == n);
        CHECK(generate(CleggDodsonParams(0.8, 0.5), n, 1).length() == n);
        CHECK(generate(PsstParams(10.0, 3.0, PsstVariant::A), n, 1).length() == n);
        CHECK(generate(BernoulliParams(0.4), n, 1).length() == n);
        CHECK(generate(FgnParams(0.75, 0.4), n, 1).length() == n);
        const DiscreteDistribution d({0.0, 0.5, 0.5});
        CHECK(generate(ArrowsmithBarencoParams(d, d), n, 1).length() == n);
    }
}

TEST_CASE("bernoulli: endpoint and sample-mean behaviour") {
    const auto all_on = bernoulli_generate(BernoulliParams(1.0), 1000, 3);
    CHECK(all_on.ones() == 1000);
    const auto all_off = bernoulli_generate(BernoulliParams(0.0), 1000, 3);
    CHECK(all_off.ones() == 0);

    const std::size_t n = 1000000;
    const auto s = bernoulli_generate(BernoulliParams(0.094), n, 20240817);
    const double se = std::sqrt(0.094 * 0.906 / static_cast<double>(n));
    CHECK(std::fabs(s.mean() - 0.094) < 3.0 * se);

    // independence: lag-1 autocorrelation within 3 SE of zero
    const auto acf = test_util::empirical_acf(test_util::to_doubles(s), {1});
    CHECK(std::fabs(acf[0]) < 3.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("psst: variant A is the bitwise complement of variant B") {
    const std::size_t n = 20000;
    const auto a = generate(PsstParams(20.0, 2.5, PsstVariant::A), n, 7);
    const auto b = generate(PsstParams(20.0, 2.5, PsstVariant::B), n, 7);
    REQUIRE(a.length() == b.length());
    for (std::size_t i = 0; i < n; ++i) CHECK(a.values[i] + b.values[i] == 1);
}

TEST_CASE("wang: ones-run law matches the jump distribution") {
    // runs are i.i.d. draws from f_k / a, so binomial errors apply per run
    const WangParams p(0.5, 0.5);
    const auto series = generate(p, 2000000, 101);
    const auto hist = run_length_histograms(series);
    double total_runs = 0.0;
    for (double c : hist.ones) total_runs += c;
    REQUIRE(total_runs > 100000);
    for (long k = 1; k <= 5; ++k) {
        const double expected = wang_transition_prob(p, k) / p.a;
        const double observed =
            (static_cast<std::size_t>(k) < hist.ones.size() ? hist.ones[k] : 0.0) / total_runs;
        const double se = std::sqrt(expected * (1.0 - expected) / total_runs);
        INFO("k=", k, " observed=", observed, " expected=", expected);
        CHECK(std::fabs(observed - expected) < 4.0 * se);
    }
}

TEST_CASE("cd: off-run lengths are geometric in f0") {
    const CleggDodsonParams p(0.906, 0.4);
    const auto series = generate(p, 1000000, 11);
    const auto hist = run_length_histograms(series);
    double total = 0.0;
    for (double c : hist.zeros) total += c;
    REQUIRE(total > 10000);
    // P(zero-run > m) = f0^m
    const double f0 = p.f0();
    for (long m = 1; m <= 3; ++m) {
        double tail = 0.0;
        for (std::size_t k = static_cast<std::size_t>(m) + 1; k < hist.zeros.size(); ++k)
            tail += hist.zeros[k];
        const double expected = std::pow(f0, m);
        const double se = std::sqrt(expected * (1.0 - expected) / total);
        CHECK(std::fabs(tail / total - expected) < 4.0 * se);
    }
}
