#pragma once
// Exact first-return-time tail of the PSST chain.
//
// P(R0 > k) is evaluated in exact rational arithmetic (GMP) because the
// alternating binomial sum is hopeless in floating point: the binomial
// coefficients and the (a/q)^j factors explode while the result stays in
// [0,1].  Two independent routes are provided for the infinite chain (the
// direct alternating sum and the odd-k paired form, which agree as exact
// rationals) plus the finite-n truncated chain for cross-checks.
//
// Conventions: the formulas carry Sigma_i^k with the entry step not
// counted, so the printed tail at k equals the simulated P(R0 > k+1); in
// particular the value at k = 0 is 1/(a-1), not 1.  Callers comparing
// against step-counting simulations must shift by one lag.

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace lrd {

// Exact rational probability in [0,1].
struct ExactProbability {
    mpq_class value;

    double to_double() const { return value.get_d(); }
    std::string decimal(int significant_digits = 30) const;
};

// Validates a > 2 and a > q > 1 (throws std::invalid_argument).
void validate_tail_params(const mpq_class& a, const mpq_class& q);

// Truncated chain with states 0..n: P(R0 > k) = sum_{i=1..n} a^-i (1-(q/a)^i)^k.
ExactProbability return_tail_finite(const mpq_class& a, const mpq_class& q, long n, long k);

// All of k = 0..k_max in one pass (the per-k powers update incrementally).
std::vector<ExactProbability> return_tail_finite_sweep(const mpq_class& a, const mpq_class& q,
                                                       long n, long k_max);

// Infinite chain.  Uses the paired-difference form for odd k and the
// direct alternating sum otherwise.
ExactProbability return_tail_infinite(const mpq_class& a, const mpq_class& q, long k);

// The two evaluation routes, exposed so they can be checked against each
// other as exact rationals.
ExactProbability return_tail_infinite_direct(const mpq_class& a, const mpq_class& q, long k);
ExactProbability return_tail_infinite_paired(const mpq_class& a, const mpq_class& q, long k);

// Heavy-tail probe: (k, P(R0 > k) * exp(eps*k)) over k in [k_lo, k_hi].
// For the infinite chain the product eventually grows without bound; for a
// finite chain it eventually decays whenever eps < -ln(max_i Sigma_i).
// The product is returned as a double computed in the log domain.
struct ProbePoint {
    long k;
    double probe;
    double log10_tail;
};
std::vector<ProbePoint> heavy_tail_probe(const mpq_class& a, const mpq_class& q, double eps,
                                         long k_lo, long k_hi,
                                         std::optional<long> n = std::nullopt);

// Plot-ready table of (k, tail).  Every integer k when k_max < max_points,
// otherwise k = 0 plus a logarithmic integer grid up to k_max.
struct LogLogRow {
    long k;
    ExactProbability tail;
    double log10_k;  // -inf for k = 0
    double log10_tail;
};
std::vector<LogLogRow> loglog_table(const mpq_class& a, const mpq_class& q, long k_max,
                                    std::size_t max_points = 257);

// CSV export: columns k,tail,log10_k,log10_tail.
void write_loglog_csv(const std::vector<LogLogRow>& rows, const std::string& path);

// Decimal rendering of an exact rational at a given number of significant
// digits.  Plain positional form for moderate exponents, scientific
// otherwise; never locale-dependent.
std::string to_decimal_string(const mpq_class& value, int significant_digits = 30);

// log10 of a positive rational, accurate to double precision even when
// numerator/denominator far exceed the double range.
double log10_mpq(const mpq_class& value);

}  // namespace lrd
