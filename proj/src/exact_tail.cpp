#include "lrd/exact_tail.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace lrd {

namespace {

mpz_class pow_mpz(const mpz_class& base, unsigned long e) {
    mpz_class out;
    mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), e);
    return out;
}

mpz_class pow10_mpz(unsigned long e) { return pow_mpz(mpz_class(10), e); }

mpz_class binom(unsigned long n, unsigned long k) {
    mpz_class out;
    mpz_bin_uiui(out.get_mpz_t(), n, k);
    return out;
}

// g(j) = 1/(a*(a/q)^j - 1) for j = 0..k, as exact rationals.
std::vector<mpq_class> g_values(const mpq_class& a, const mpq_class& q, long k) {
    std::vector<mpq_class> g(static_cast<std::size_t>(k) + 1);
    const mpq_class ratio = a / q;
    mpq_class x = a;  // a*(a/q)^j
    for (long j = 0; j <= k; ++j) {
        mpq_class den = x - 1;
        g[static_cast<std::size_t>(j)] = mpq_class(1) / den;
        x *= ratio;
    }
    return g;
}

}  // namespace

void validate_tail_params(const mpq_class& a, const mpq_class& q) {
    if (!(a > 2)) throw std::invalid_argument("return tail: a must be > 2");
    if (!(q > 1)) throw std::invalid_argument("return tail: q must be > 1");
    if (!(a > q)) throw std::invalid_argument("return tail: requires a > q");
}

ExactProbability return_tail_finite(const mpq_class& a, const mpq_class& q, long n, long k) {
    validate_tail_params(a, q);
    if (n < 1) throw std::invalid_argument("return_tail_finite: n must be >= 1");
    if (k < 0) throw std::invalid_argument("return_tail_finite: k must be >= 0");

    // With a = an/ad and r = q/a = rn/rd (lowest terms):
    //   term_i = ad^i * (rd^i - rn^i)^k / W^i,   W = an * rd^k,
    // so the sum is  [ sum_i ad^i (rd^i - rn^i)^k W^(n-i) ] / W^n,
    // accumulated by Horner in W with pure integer arithmetic.
    mpq_class r = q / a;
    const mpz_class an = a.get_num(), ad = a.get_den();
    const mpz_class rn = r.get_num(), rd = r.get_den();
    const mpz_class w = an * pow_mpz(rd, static_cast<unsigned long>(k));

    mpz_class numer = 0;
    mpz_class rd_i = 1, rn_i = 1, ad_i = 1;
    for (long i = 1; i <= n; ++i) {
        rd_i *= rd;
        rn_i *= rn;
        ad_i *= ad;
        const mpz_class t = rd_i - rn_i;
        numer = numer * w + ad_i * pow_mpz(t, static_cast<unsigned long>(k));
    }
    mpq_class result(numer, pow_mpz(w, static_cast<unsigned long>(n)));
    result.canonicalize();
    return {result};
}

std::vector<ExactProbability> return_tail_finite_sweep(const mpq_class& a, const mpq_class& q,
                                                       long n, long k_max) {
    validate_tail_params(a, q);
    if (n < 1) throw std::invalid_argument("return_tail_finite_sweep: n must be >= 1");
    if (k_max < 0) throw std::invalid_argument("return_tail_finite_sweep: k_max must be >= 0");

    mpq_class r = q / a;
    const mpz_class an = a.get_num(), ad = a.get_den();
    const mpz_class rn = r.get_num(), rd = r.get_den();

    // per-state integers: t[i] = rd^(i+1) - rn^(i+1), adp[i] = ad^(i+1)
    const std::size_t nn = static_cast<std::size_t>(n);
    std::vector<mpz_class> t(nn), adp(nn), tp(nn, mpz_class(1));
    {
        mpz_class rd_i = 1, rn_i = 1, ad_i = 1;
        for (std::size_t i = 0; i < nn; ++i) {
            rd_i *= rd;
            rn_i *= rn;
            ad_i *= ad;
            t[i] = rd_i - rn_i;
            adp[i] = ad_i;
        }
    }

    std::vector<ExactProbability> out;
    out.reserve(static_cast<std::size_t>(k_max) + 1);
    mpz_class w_base = 1;  // rd^k
    for (long k = 0; k <= k_max; ++k) {
        const mpz_class w = an * w_base;
        mpz_class numer = 0;
        for (std::size_t i = 0; i < nn; ++i) numer = numer * w + adp[i] * tp[i];
        mpq_class result(numer, pow_mpz(w, static_cast<unsigned long>(n)));
        result.canonicalize();
        out.push_back({result});
        if (k < k_max) {
            for (std::size_t i = 0; i < nn; ++i) tp[i] *= t[i];  // -> t_i^(k+1)
            w_base *= rd;
        }
    }
    return out;
}

ExactProbability return_tail_infinite_direct(const mpq_class& a, const mpq_class& q, long k) {
    validate_tail_params(a, q);
    if (k < 0) throw std::invalid_argument("return_tail_infinite: k must be >= 0");
    const auto g = g_values(a, q, k);
    mpq_class sum = 0;
    mpz_class c = 1;  // C(k, j), updated incrementally
    for (long j = 0; j <= k; ++j) {
        mpq_class term(c);
        term *= g[static_cast<std::size_t>(j)];
        if (j & 1) sum -= term;
        else sum += term;
        if (j < k) {
            c *= static_cast<unsigned long>(k - j);
            mpz_divexact_ui(c.get_mpz_t(), c.get_mpz_t(), static_cast<unsigned long>(j) + 1);
        }
    }
    return {sum};
}

ExactProbability return_tail_infinite_paired(const mpq_class& a, const mpq_class& q, long k) {
    validate_tail_params(a, q);
    if (k < 1 || k % 2 == 0)
        throw std::invalid_argument("return_tail_infinite_paired: k must be odd");
    const auto g = g_values(a, q, k);
    mpq_class sum = 0;
    for (long j = 0; 2 * j <= k - 1; ++j) {
        mpq_class diff = g[static_cast<std::size_t>(2 * j)] -
                         g[static_cast<std::size_t>(k - 2 * j)];
        mpq_class term(binom(static_cast<unsigned long>(k), static_cast<unsigned long>(2 * j)));
        term *= diff;
        sum += term;
    }
    return {sum};
}

ExactProbability return_tail_infinite(const mpq_class& a, const mpq_class& q, long k) {
    if (k >= 1 && (k % 2 == 1)) return return_tail_infinite_paired(a, q, k);
    return return_tail_infinite_direct(a, q, k);
}

std::vector<ProbePoint> heavy_tail_probe(const mpq_class& a, const mpq_class& q, double eps,
                                         long k_lo, long k_hi, std::optional<long> n) {
    validate_tail_params(a, q);
    if (!(eps >= 0.0)) throw std::invalid_argument("heavy_tail_probe: eps must be >= 0");
    if (k_lo < 0 || k_hi < k_lo) throw std::invalid_argument("heavy_tail_probe: bad k range");
    std::vector<ProbePoint> out;
    out.reserve(static_cast<std::size_t>(k_hi - k_lo) + 1);
    if (n) {
        const auto sweep = return_tail_finite_sweep(a, q, *n, k_hi);
        for (long k = k_lo; k <= k_hi; ++k) {
            const double l10 = log10_mpq(sweep[static_cast<std::size_t>(k)].value);
            const double ln_tail = l10 * 2.302585092994045684;
            out.push_back({k, std::exp(eps * k + ln_tail), l10});
        }
    } else {
        for (long k = k_lo; k <= k_hi; ++k) {
            const auto tail = return_tail_infinite(a, q, k);
            const double l10 = log10_mpq(tail.value);
            const double ln_tail = l10 * 2.302585092994045684;
            out.push_back({k, std::exp(eps * k + ln_tail), l10});
        }
    }
    return out;
}

std::vector<LogLogRow> loglog_table(const mpq_class& a, const mpq_class& q, long k_max,
                                    std::size_t max_points) {
    validate_tail_params(a, q);
    if (k_max < 1 || k_max > 10000)
        throw std::invalid_argument("loglog_table: k_max must lie in [1, 1e4]");
    if (max_points < 2) throw std::invalid_argument("loglog_table: max_points must be >= 2");

    std::vector<long> ks;
    if (static_cast<std::size_t>(k_max) + 1 <= max_points) {
        for (long k = 0; k <= k_max; ++k) ks.push_back(k);
    } else {
        ks.push_back(0);
        const double steps = static_cast<double>(max_points - 2);
        long prev = 0;
        for (std::size_t i = 0; i + 1 < max_points; ++i) {
            const double f = static_cast<double>(i) / steps;
            long k = static_cast<long>(std::llround(std::pow(static_cast<double>(k_max), f)));
            if (k <= prev) k = prev + 1;
            if (k > k_max) break;
            ks.push_back(k);
            prev = k;
        }
        if (ks.back() != k_max) ks.push_back(k_max);
    }

    std::vector<LogLogRow> rows;
    rows.reserve(ks.size());
    for (long k : ks) {
        auto tail = return_tail_infinite(a, q, k);
        const double l10t = log10_mpq(tail.value);
        const double l10k =
            k == 0 ? -std::numeric_limits<double>::infinity() : std::log10(static_cast<double>(k));
        rows.push_back({k, std::move(tail), l10k, l10t});
    }
    return rows;
}

void write_loglog_csv(const std::vector<LogLogRow>& rows, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_loglog_csv: cannot open " + path);
    out << "k,tail,log10_k,log10_tail\n";
    char buf[64];
    for (const auto& row : rows) {
        out << row.k << ',' << row.tail.decimal() << ',';
        if (std::isinf(row.log10_k)) out << "-inf";
        else {
            std::snprintf(buf, sizeof buf, "%.12g", row.log10_k);
            out << buf;
        }
        std::snprintf(buf, sizeof buf, "%.12g", row.log10_tail);
        out << ',' << buf << '\n';
    }
    if (!out) throw std::runtime_error("write_loglog_csv: write failed for " + path);
}

std::string ExactProbability::decimal(int significant_digits) const {
    return to_decimal_string(value, significant_digits);
}

std::string to_decimal_string(const mpq_class& value, int significant_digits) {
    if (significant_digits < 1 || significant_digits > 1000)
        throw std::invalid_argument("to_decimal_string: bad digit count");
    if (value == 0) return "0";
    const bool negative = value < 0;
    mpz_class n = abs(value.get_num());
    const mpz_class d = value.get_den();

    // decimal exponent e with 10^e <= n/d < 10^(e+1)
    const auto below_pow10 = [&](long ex) {  // n/d < 10^ex ?
        if (ex >= 0) return n < d * pow10_mpz(static_cast<unsigned long>(ex));
        return n * pow10_mpz(static_cast<unsigned long>(-ex)) < d;
    };
    long e = static_cast<long>(mpz_sizeinbase(n.get_mpz_t(), 10)) -
             static_cast<long>(mpz_sizeinbase(d.get_mpz_t(), 10)) - 2;
    while (!below_pow10(e + 1)) ++e;
    while (below_pow10(e)) --e;

    // digits = round(n/d * 10^(sig-1-e))
    const long shift = significant_digits - 1 - e;
    mpz_class nn = n, dd = d;
    if (shift >= 0) nn *= pow10_mpz(static_cast<unsigned long>(shift));
    else dd *= pow10_mpz(static_cast<unsigned long>(-shift));
    mpz_class digits = (2 * nn + dd) / (2 * dd);
    if (digits >= pow10_mpz(static_cast<unsigned long>(significant_digits))) {
        digits /= 10;  // rounding carried into an extra digit
        ++e;
    }
    std::string ds = digits.get_str();
    while (static_cast<int>(ds.size()) < significant_digits)
        ds.insert(ds.begin(), '0');  // leading zeros lost by get_str

    std::string out;
    if (negative) out += '-';
    if (e >= -6 && e <= 20) {
        if (e >= significant_digits - 1) {
            out += ds;
            out.append(static_cast<std::size_t>(e - (significant_digits - 1)), '0');
        } else if (e >= 0) {
            out += ds.substr(0, static_cast<std::size_t>(e) + 1);
            out += '.';
            out += ds.substr(static_cast<std::size_t>(e) + 1);
        } else {
            out += "0.";
            out.append(static_cast<std::size_t>(-e - 1), '0');
            out += ds;
        }
    } else {
        out += ds[0];
        out += '.';
        out += ds.substr(1);
        out += 'e';
        char buf[32];
        std::snprintf(buf, sizeof buf, "%+ld", e);
        out += buf;
    }
    return out;
}

double log10_mpq(const mpq_class& value) {
    if (!(value > 0)) throw std::invalid_argument("log10_mpq: value must be positive");
    signed long en = 0, ed = 0;
    const double mn = mpz_get_d_2exp(&en, value.get_num().get_mpz_t());
    const double md = mpz_get_d_2exp(&ed, value.get_den().get_mpz_t());
    constexpr double log10_2 = 0.30102999566398119521373889472449;
    return std::log10(mn) - std::log10(md) +
           (static_cast<double>(en) - static_cast<double>(ed)) * log10_2;
}

}  // namespace lrd
