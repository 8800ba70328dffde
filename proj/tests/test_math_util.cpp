#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "lrd/math_util.hpp"

namespace {

// Brute-force zeta: 2e6 raw terms plus an integral-with-midpoint tail.
// Deliberately a different route from the library's Euler-Maclaurin form.
double zeta_brute(double s) {
    const long n = 2000000;
    long double sum = 0.0L;
    for (long k = n - 1; k >= 1; --k) sum += std::pow(static_cast<long double>(k), -s);
    const long double ns = std::pow(static_cast<long double>(n), -s);
    return static_cast<double>(sum + n * ns / (s - 1.0L) + 0.5L * ns);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace

TEST_CASE("riemann_zeta matches reference values") {
    CHECK(lrd::riemann_zeta(1.5) == doctest::Approx(2.612375348685488).epsilon(1e-12));
    CHECK(lrd::riemann_zeta(1.4) == doctest::Approx(3.105547277977580).epsilon(1e-12));
    CHECK(lrd::riemann_zeta(1.1) == doctest::Approx(10.584448464950810).epsilon(1e-12));
    CHECK(lrd::riemann_zeta(2.0) == doctest::Approx(1.644934066848226).epsilon(1e-12));
}

TEST_CASE("riemann_zeta agrees with brute-force summation") {
    for (double s : {1.3, 1.5, 1.7, 2.0}) {
        CHECK(lrd::riemann_zeta(s) == doctest::Approx(zeta_brute(s)).epsilon(1e-9));
    }
}

TEST_CASE("riemann_zeta rejects s <= 1") {
    CHECK_THROWS_AS(lrd::riemann_zeta(1.0), std::invalid_argument);
    CHECK_THROWS_AS(lrd::riemann_zeta(0.5), std::invalid_argument);
}

TEST_CASE("normal_quantile reference points and round trip") {
    CHECK(lrd::normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(lrd::normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-12));
    CHECK(lrd::normal_quantile(0.025) == doctest::Approx(-1.959963984540054).epsilon(1e-12));
    for (double p : {1e-6, 0.01, 0.094, 0.3, 0.7, 0.906, 0.99, 1.0 - 1e-6}) {
        CHECK(normal_cdf(lrd::normal_quantile(p)) == doctest::Approx(p).epsilon(1e-9));
    }
    CHECK_THROWS_AS(lrd::normal_quantile(0.0), std::invalid_argument);
    CHECK_THROWS_AS(lrd::normal_quantile(1.0), std::invalid_argument);
}

TEST_CASE("linear_fit recovers an exact line") {
    std::vector<double> x{1, 2, 3, 4, 5}, y;
    for (double xi : x) y.push_back(3.0 - 2.0 * xi);
    const auto fit = lrd::linear_fit(x, y);
    CHECK(fit.slope == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK(fit.intercept == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(fit.residual_rms == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("weighted_linear_fit downweights an outlier") {
    std::vector<double> x{0, 1, 2, 3}, y{0, 1, 2, 100}, w{1, 1, 1, 1e-12};
    const auto fit = lrd::weighted_linear_fit(x, y, w);
    CHECK(fit.slope == doctest::Approx(1.0).epsilon(1e-6));
}
