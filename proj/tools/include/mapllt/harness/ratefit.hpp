#pragma once

#include <vector>

namespace mapllt::harness {

// Ordinary least squares on (log t, log y).  slope estimates the exponent of
// a power law y ~ c * t^slope; the 95% confidence interval always contains
// the point estimate.
struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;  // log c
  double rSquared = 0.0;   // in [0, 1]
  double ciLow = 0.0;
  double ciHigh = 0.0;
};

RateFit fit_rate(const std::vector<double>& ts, const std::vector<double>& ys);

}  // namespace mapllt::harness
