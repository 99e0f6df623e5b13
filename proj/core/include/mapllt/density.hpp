#pragma once

#include <cstddef>
#include <vector>

#include "mapllt/deviation.hpp"
#include "mapllt/types.hpp"

// ---------------------------------------------------------------------------
// Gaussian-kernel density estimation on rectangular grids (d <= 2) and the
// exact Gaussian target it is compared against.
// ---------------------------------------------------------------------------

namespace mapllt::sim {

struct GridAxis {
  double min = 0.0;
  double step = 0.0;
  int count = 0;

  double coordinate(int i) const { return min + step * i; }
  double max() const { return coordinate(count - 1); }
};

// Rectangular lattice, row-major with axis 0 slowest.
class Grid {
 public:
  explicit Grid(std::vector<GridAxis> axes);

  int dim() const { return static_cast<int>(axes_.size()); }
  const GridAxis& axis(int j) const { return axes_[static_cast<std::size_t>(j)]; }
  std::size_t size() const;
  double cellVolume() const;

 private:
  std::vector<GridAxis> axes_;
};

// Standard experiment grid for a positive definite target: +-5 marginal
// standard deviations per axis, step 0.05 sd in 1D and 0.1 sd in 2D.
Grid default_grid(const markov::CovarianceMatrix& sigma);

// Per-dimension Silverman bandwidth: 1.06 sd m^{-1/5} in 1D, the standard
// multivariate analog sd_j (4/((d+2)m))^{1/(d+4)} otherwise.
Vector silverman_bandwidth(const Matrix& samples);

struct EmpiricalDensity {
  Grid grid;
  std::vector<double> values;  // grid order, >= 0
  Vector bandwidth;
  std::size_t sampleCount = 0;

  double mass() const;  // Riemann sum over the grid
};

// Mergeable partial sums of truncated Gaussian product kernels. Kernels are
// cut at 8.5 bandwidths, below double rounding of the omitted tail.
class KdeAccumulator {
 public:
  KdeAccumulator(Grid grid, Vector bandwidth);

  void add(const double* x);
  void add(const Vector& x);
  void merge(const KdeAccumulator& other);
  std::size_t added() const { return added_; }
  EmpiricalDensity finish() const;

 private:
  Grid grid_;
  Vector bandwidth_;
  std::vector<double> sums_;
  std::size_t added_ = 0;
};

// Gaussian-kernel estimate from a row-per-sample matrix. Requires
// tol::kMinDensitySamples samples and bandwidth >= grid step / 4 per axis
// (BandwidthTooSmall otherwise: the kernel would fall between grid points).
EmpiricalDensity kde_density(const Matrix& samples, const Grid& grid, const Vector& bandwidth);

// Exact centered Gaussian density on the grid, in grid order.
std::vector<double> gaussian_density(const markov::CovarianceMatrix& sigma, const Grid& grid);

}  // namespace mapllt::sim
