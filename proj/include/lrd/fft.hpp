#pragma once
// Minimal FFT support: iterative radix-2 for power-of-two lengths and a
// Bluestein fallback so the periodogram works at any length.

#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace lrd {

// In-place radix-2 transform; size must be a power of two.
inline void fft_pow2(std::vector<std::complex<double>>& a, bool inverse) {
    const std::size_t n = a.size();
    if (n == 0 || (n & (n - 1)) != 0)
        throw std::invalid_argument("fft_pow2: length must be a power of two");
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    const double pi = 3.14159265358979323846264338327950288;
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = 2.0 * pi / static_cast<double>(len) * (inverse ? 1.0 : -1.0);
        const std::complex<double> wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t j = 0; j < len / 2; ++j) {
                const std::complex<double> u = a[i + j];
                const std::complex<double> v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
    if (inverse)
        for (auto& x : a) x /= static_cast<double>(n);
}

// Forward DFT of arbitrary length via Bluestein's chirp-z identity.
inline std::vector<std::complex<double>> dft_any(const std::vector<std::complex<double>>& x) {
    const std::size_t n = x.size();
    if (n == 0) return {};
    if ((n & (n - 1)) == 0) {
        auto a = x;
        fft_pow2(a, false);
        return a;
    }
    const double pi = 3.14159265358979323846264338327950288;
    const std::size_t m = std::bit_ceil(2 * n - 1);
    std::vector<std::complex<double>> a(m, {0.0, 0.0}), b(m, {0.0, 0.0});
    std::vector<std::complex<double>> chirp(n);
    for (std::size_t k = 0; k < n; ++k) {
        // k^2/2 mod n kept exact by reducing k^2 mod 2n in integers
        const std::size_t k2 = (k * k) % (2 * n);
        const double ang = pi * static_cast<double>(k2) / static_cast<double>(n);
        chirp[k] = {std::cos(ang), -std::sin(ang)};
        a[k] = x[k] * chirp[k];
        b[k] = std::conj(chirp[k]);
        if (k > 0) b[m - k] = std::conj(chirp[k]);
    }
    fft_pow2(a, false);
    fft_pow2(b, false);
    for (std::size_t i = 0; i < m; ++i) a[i] *= b[i];
    fft_pow2(a, true);
    std::vector<std::complex<double>> out(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = a[k] * chirp[k];
    return out;
}

}  // namespace lrd
