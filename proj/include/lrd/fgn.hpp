#pragma once
// Fractional Gaussian noise with exact target covariance (circulant
// embedding), plus the thresholded on/off adaptation.

#include <cstdint>
#include <vector>

#include "lrd/binary_series.hpp"
#include "lrd/models.hpp"

namespace lrd {

// Stationary zero-mean, unit-variance fGn of length n with Hurst parameter
// H in (0,1).  The covariance is matched exactly: the series is drawn from
// the circulant embedding of the autocovariance on a grid rounded up to a
// power of two and truncated back to n.
std::vector<double> fgn_generate(double hurst, std::size_t n, std::uint64_t seed);

// fGn thresholded at the standard-normal (1-mu)-quantile: symbol 1 where
// the Gaussian exceeds the threshold, so the marginal on-probability is mu
// exactly in distribution.
BinarySeries fgn_onoff_generate(const FgnParams& p, std::size_t n, std::uint64_t seed,
                                std::size_t warmup = 0);

}  // namespace lrd
