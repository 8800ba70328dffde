#pragma once
// Small numeric helpers used across the library.

#include <cstddef>
#include <vector>

namespace lrd {

// Riemann zeta for s > 1: direct summation plus Euler-Maclaurin tail,
// absolute error below 1e-12 on (1, 2] (and better for larger s).
double riemann_zeta(double s);

// Standard-normal quantile (inverse CDF), p in (0,1).  Wichura's AS241.
double normal_quantile(double p);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual_rms = 0.0;
};

// Ordinary least squares of y on x.  Requires >= 2 points.
LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

// Weighted least squares; weights must be positive.
LinearFit weighted_linear_fit(const std::vector<double>& x, const std::vector<double>& y,
                              const std::vector<double>& w);

}  // namespace lrd
