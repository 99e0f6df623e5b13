#include "mapllt/harness/ratefit.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>

#include "mapllt/errors.hpp"

namespace mapllt::harness {

namespace {

// Two-sided 97.5% Student-t quantiles for df = 1..30; 1.96 beyond.
constexpr double kT975[30] = {12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306,
                              2.262,  2.228, 2.201, 2.179, 2.160, 2.145, 2.131, 2.120,
                              2.110,  2.101, 2.093, 2.086, 2.080, 2.074, 2.069, 2.064,
                              2.060,  2.056, 2.052, 2.048, 2.045, 2.042};

double t_critical(std::size_t df) {
  if (df == 0) return 0.0;
  if (df <= 30) return kT975[df - 1];
  return 1.96;
}

}  // namespace

RateFit fit_rate(const std::vector<double>& ts, const std::vector<double>& ys) {
  if (ts.size() != ys.size())
    throw InvalidInput("rate fit: " + std::to_string(ts.size()) + " abscissae vs " +
                       std::to_string(ys.size()) + " values");
  const std::size_t m = ts.size();
  if (m < 3) throw DegenerateInput("rate fit needs at least 3 points, got " + std::to_string(m));
  for (std::size_t i = 0; i < m; ++i) {
    if (!(ts[i] > 0.0))
      throw DegenerateInput("rate fit: t[" + std::to_string(i) + "] = " + std::to_string(ts[i]) +
                            " is not positive");
    if (!(ys[i] > 0.0))
      throw DegenerateInput("rate fit: y[" + std::to_string(i) + "] = " + std::to_string(ys[i]) +
                            " is not positive");
  }

  double xBar = 0.0, zBar = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    xBar += std::log(ts[i]);
    zBar += std::log(ys[i]);
  }
  xBar /= static_cast<double>(m);
  zBar /= static_cast<double>(m);

  double sxx = 0.0, sxz = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double dx = std::log(ts[i]) - xBar;
    sxx += dx * dx;
    sxz += dx * (std::log(ys[i]) - zBar);
  }
  if (sxx <= 0.0) throw DegenerateInput("rate fit: all abscissae coincide");

  RateFit fit;
  fit.slope = sxz / sxx;
  fit.intercept = zBar - fit.slope * xBar;

  double ssRes = 0.0, ssTot = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double z = std::log(ys[i]);
    const double zHat = fit.intercept + fit.slope * std::log(ts[i]);
    ssRes += (z - zHat) * (z - zHat);
    ssTot += (z - zBar) * (z - zBar);
  }
  // A flat response is fit perfectly by the flat line.
  fit.rSquared = ssTot > 0.0 ? std::clamp(1.0 - ssRes / ssTot, 0.0, 1.0) : 1.0;

  const std::size_t df = m - 2;
  const double seSlope = std::sqrt(ssRes / static_cast<double>(df) / sxx);
  const double half = t_critical(df) * seSlope;
  fit.ciLow = fit.slope - half;
  fit.ciHigh = fit.slope + half;
  return fit;
}

}  // namespace mapllt::harness
