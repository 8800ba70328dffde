#pragma once
// On/off traffic source models.
//
// Four Markov-modulated sources share an infinite-state chain whose zero
// state is "off".  Two of them (Wang, Clegg/Dodson) use the companion
// topology: state 0 jumps to state k with probability f_k and every state
// k > 0 steps deterministically to k-1, so an excursion of height k emits
// exactly k consecutive ones.  The PSST chain is a star: state 0 feeds
// state i with probability a^-i and state i returns to 0 with probability
// (q/a)^i per step.  The double-sided model alternates off-runs drawn from
// a left-hand length distribution with on-runs drawn from a right-hand
// one.  Bernoulli and thresholded fractional Gaussian noise round out the
// set as baselines.
//
// All parameter validation happens at construction; generation never
// fails.  Every generator is a pure function of (params, n, seed).

#include <cstdint>
#include <variant>
#include <vector>

#include "lrd/binary_series.hpp"

namespace lrd {

// ---------------------------------------------------------------------------
// Parameter sets
// ---------------------------------------------------------------------------

struct WangParams {
    double a;      // stay-at-zero complement: f0 = 1 - a; requires a in (0,1)
    double alpha;  // tail exponent, > 0; long-range dependent for alpha in (0,1)

    WangParams(double a_, double alpha_);
};

struct CleggDodsonParams {
    double pi0;    // equilibrium probability of the zero state, = 1 - mean
    double alpha;  // tail exponent in (0,1), H = 1 - alpha/2

    // Rejects pi0 <= (2^alpha - 1)/(2^(alpha+1) - 1), where f0 would go
    // negative and the transition row stops being a distribution.
    CleggDodsonParams(double pi0_, double alpha_);

    double f0() const;
    // Validity threshold on pi0 for a given alpha.
    static double pi0_threshold(double alpha);
};

enum class PsstVariant {
    A,  // emits 1 only in state 0
    B,  // emits 1 in every nonzero state
};

struct PsstParams {
    double a;  // > 2 (keeps the state-0 row stochastic in the infinite chain)
    double q;  // 1 < q < a; controls the mean
    PsstVariant variant;

    PsstParams(double a_, double q_, PsstVariant variant_);
};

// Finite length-distribution over {1, 2, ...} stored as a dense pmf.
class DiscreteDistribution {
public:
    static constexpr std::size_t kMaxSupport = 1000000;

    // pmf[k] = P(length = k), k >= 1; pmf[0] must be 0.  The mass must sum
    // to 1 within 1e-12.
    explicit DiscreteDistribution(std::vector<double> pmf);

    // Normalizes a histogram of nonnegative counts (index = length).
    static DiscreteDistribution from_counts(const std::vector<double>& counts);

    double mean() const { return mean_; }
    std::size_t max_length() const { return pmf_.size() - 1; }
    double pmf(std::size_t k) const { return k < pmf_.size() ? pmf_[k] : 0.0; }

    // CDF-inversion sampling; u must be in (0,1).
    std::size_t sample(double u) const;

private:
    std::vector<double> pmf_;  // index = length, [0] == 0
    std::vector<double> cdf_;
    double mean_ = 0.0;
};

struct ArrowsmithBarencoParams {
    DiscreteDistribution off_lengths;  // left side: inter-packet gap runs
    DiscreteDistribution on_lengths;   // right side: packet-train runs

    ArrowsmithBarencoParams(DiscreteDistribution off, DiscreteDistribution on)
        : off_lengths(std::move(off)), on_lengths(std::move(on)) {}
};

struct FgnParams {
    double hurst;  // in (1/2, 1)
    double mu;     // target on-probability, in (0,1)

    FgnParams(double hurst_, double mu_);
};

struct BernoulliParams {
    double mu;  // on-probability in [0,1]; endpoints give constant series

    explicit BernoulliParams(double mu_);
};

using ModelParams = std::variant<WangParams, CleggDodsonParams, PsstParams,
                                 ArrowsmithBarencoParams, FgnParams, BernoulliParams>;

// ---------------------------------------------------------------------------
// Closed forms
// ---------------------------------------------------------------------------

// Wang transition probability out of state 0:
//   f_0 = 1 - a,  f_k = a/k^(alpha+1) - a/(k+1)^(alpha+1)  (k >= 1).
// The sum telescopes to 1 exactly.
double wang_transition_prob(const WangParams& p, long k);

// mu = 1 - [1 + a * zeta(alpha+1)]^-1.
double wang_mean(const WangParams& p);

// Inverse of wang_mean at fixed alpha: a = mu / ((1-mu) * zeta(alpha+1)).
// Throws std::domain_error when the resulting a falls outside (0,1).
double wang_fit_a(double mu, double alpha);

// Equilibrium occupancy: pi_0 = 1 - mu, pi_k = pi_0 * a * k^-(alpha+1).
double wang_equilibrium(const WangParams& p, long k);

// Clegg/Dodson transition probability out of state 0.
double cd_transition_prob(const CleggDodsonParams& p, long k);

// Tail of the equilibrium distribution: sum_{i>=k} pi_i = (1-pi0) k^-alpha,
// k >= 1.  Equals the probability that a randomly chosen slot starts a
// window of at least k ones.
double cd_equilibrium_tail(const CleggDodsonParams& p, long k);

// Variant A mean (q-1)/q; variant B mean 1/q.
double psst_mean(const PsstParams& p);
double psst_mean(double q, PsstVariant variant);

// q = 1/(1-mu_a) for variant A, q = 1/mu_b for variant B.
double psst_fit_q(double mu, PsstVariant variant);

// pi_k = pi_0 / q^k with pi_0 = (q-1)/q.
double psst_equilibrium(const PsstParams& p, long k);

// Long-run on-fraction S_R / (S_R + S_L).
double ab_mean(const ArrowsmithBarencoParams& p);

// Asymptotic autocorrelation rho(k) ~ K * k^-beta for power-law run tails.
struct AcfAsymptote {
    double beta;       // min(alpha_L, alpha_R)
    double amplitude;  // K, as printed; can be negative for alpha in (0,1)
};

AcfAsymptote ab_acf_asymptote(double alpha_l, double alpha_r, double k_l, double k_r,
                              double mu, double s_total);

// Fit from run-length histograms (index = length, counts >= 0).
ArrowsmithBarencoParams ab_fit_from_empirical(const std::vector<double>& train_lengths,
                                              const std::vector<double>& gap_lengths);

// ---------------------------------------------------------------------------
// Generation
// ---------------------------------------------------------------------------

// Every overload emits exactly n symbols after discarding `warmup` slots.
// The chain starts in state 0.
BinarySeries generate(const WangParams& p, std::size_t n, std::uint64_t seed,
                      std::size_t warmup = 0);
BinarySeries generate(const CleggDodsonParams& p, std::size_t n, std::uint64_t seed,
                      std::size_t warmup = 0);
BinarySeries generate(const PsstParams& p, std::size_t n, std::uint64_t seed,
                      std::size_t warmup = 0);
BinarySeries generate(const ArrowsmithBarencoParams& p, std::size_t n, std::uint64_t seed,
                      std::size_t warmup = 0);
BinarySeries generate(const BernoulliParams& p, std::size_t n, std::uint64_t seed,
                      std::size_t warmup = 0);
BinarySeries generate(const FgnParams& p, std::size_t n, std::uint64_t seed,
                      std::size_t warmup = 0);
BinarySeries generate(const ModelParams& p, std::size_t n, std::uint64_t seed,
                      std::size_t warmup = 0);

BinarySeries bernoulli_generate(const BernoulliParams& p, std::size_t n, std::uint64_t seed);

// Simulated first-return times to state 0 of the PSST chain (step counts,
// >= 1).  Used to cross-check the exact tail formulas.
std::vector<std::int64_t> psst_sample_return_times(const PsstParams& p, std::size_t count,
                                                   std::uint64_t seed);

// Time spent in each chain state over an n-step walk from state 0, states
// above max_state lumped into the last entry.  Follows the same sample
// path as generate() for equal seeds.
std::vector<double> psst_state_occupancy(const PsstParams& p, std::size_t n,
                                         std::uint64_t seed, std::size_t max_state = 200);

}  // namespace lrd
