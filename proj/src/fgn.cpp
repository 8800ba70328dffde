#include "lrd/fgn.hpp"

#include <bit>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "lrd/fft.hpp"
#include "lrd/math_util.hpp"
#include "lrd/rng.hpp"

namespace lrd {

namespace {

// fGn autocovariance gamma(k) = ((k+1)^2H - 2k^2H + (k-1)^2H)/2, written as
// k^2H * ((1+1/k)^2H - 2 + (1-1/k)^2H)/2 so the cancellation happens between
// numbers near 1 instead of between large powers.
double fgn_autocov(double two_h, std::int64_t k) {
    if (k == 0) return 1.0;
    const double kk = static_cast<double>(k);
    const double inv = 1.0 / kk;
    const double bracket =
        std::expm1(two_h * std::log1p(inv)) + std::expm1(two_h * std::log1p(-inv));
    return 0.5 * std::pow(kk, two_h) * bracket;
}

}  // namespace

std::vector<double> fgn_generate(double hurst, std::size_t n, std::uint64_t seed) {
    if (!(hurst > 0.0 && hurst < 1.0))
        throw std::invalid_argument("fgn_generate: H must lie in (0,1)");
    if (n == 0) throw std::invalid_argument("fgn_generate: n must be >= 1");

    const std::size_t m = std::bit_ceil(n);
    const std::size_t two_m = 2 * m;
    const double two_h = 2.0 * hurst;

    // first row of the circulant embedding
    std::vector<std::complex<double>> eig(two_m);
    for (std::size_t k = 0; k <= m; ++k)
        eig[k] = fgn_autocov(two_h, static_cast<std::int64_t>(k));
    for (std::size_t k = m + 1; k < two_m; ++k) eig[k] = eig[two_m - k];
    fft_pow2(eig, false);

    double max_eig = 0.0;
    for (const auto& v : eig) max_eig = std::max(max_eig, v.real());
    for (auto& v : eig) {
        double lam = v.real();
        if (lam < 0.0) {
            if (lam < -1e-9 * max_eig)
                throw std::runtime_error("fgn_generate: embedding not nonnegative definite");
            lam = 0.0;
        }
        v = lam;
    }

    RandomSource rng(seed);
    std::vector<std::complex<double>> spec(two_m);
    const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(two_m));
    spec[0] = std::sqrt(eig[0].real()) * rng.gaussian();
    spec[m] = std::sqrt(eig[m].real()) * rng.gaussian();
    for (std::size_t k = 1; k < m; ++k) {
        const double s = std::sqrt(0.5 * eig[k].real());
        const std::complex<double> z(s * rng.gaussian(), s * rng.gaussian());
        spec[k] = z;
        spec[two_m - k] = std::conj(z);
    }
    fft_pow2(spec, false);

    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = spec[i].real() * inv_sqrt;
    return out;
}

BinarySeries fgn_onoff_generate(const FgnParams& p, std::size_t n, std::uint64_t seed,
                                std::size_t warmup) {
    if (n == 0) throw std::invalid_argument("fgn_onoff_generate: n must be >= 1");
    const std::vector<double> g = fgn_generate(p.hurst, n, seed);
    const double threshold = normal_quantile(1.0 - p.mu);
    BinarySeries out;
    out.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.values[i] = g[i] > threshold ? 1 : 0;
    if (warmup > 0) {
        if (warmup >= n) throw std::invalid_argument("fgn_onoff_generate: warmup >= n");
        out.values.erase(out.values.begin(), out.values.begin() + warmup);
    }
    return out;
}

}  // namespace lrd
