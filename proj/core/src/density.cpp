#include "mapllt/density.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace mapllt::sim {
namespace {

constexpr double kKernelCut = 8.5;  // in bandwidths; omitted tail < 1e-16

double kernel_scale(double h) { return 1.0 / (std::sqrt(2.0 * std::numbers::pi) * h); }

struct Window {
  int lo = 0;
  int hi = -1;  // empty when hi < lo
};

Window kernel_window(const GridAxis& axis, double x, double h) {
  const double reach = kKernelCut * h;
  Window w;
  w.lo = std::max(0, static_cast<int>(std::ceil((x - reach - axis.min) / axis.step)));
  w.hi = std::min(axis.count - 1,
                  static_cast<int>(std::floor((x + reach - axis.min) / axis.step)));
  return w;
}

void require_density_dim(int d, const char* what) {
  if (d != 1 && d != 2) {
    throw InvalidInput(std::string(what) + ": density grids support d in {1, 2}");
  }
}

}  // namespace

Grid::Grid(std::vector<GridAxis> axes) : axes_(std::move(axes)) {
  if (axes_.empty()) throw InvalidInput("Grid: needs at least one axis");
  for (const auto& a : axes_) {
    if (a.count < 2 || !(a.step > 0.0) || !std::isfinite(a.min)) {
      throw InvalidInput("Grid: axis needs finite min, positive step, count >= 2");
    }
  }
}

std::size_t Grid::size() const {
  std::size_t total = 1;
  for (const auto& a : axes_) total *= static_cast<std::size_t>(a.count);
  return total;
}

double Grid::cellVolume() const {
  double v = 1.0;
  for (const auto& a : axes_) v *= a.step;
  return v;
}

Grid default_grid(const markov::CovarianceMatrix& sigma) {
  sigma.requirePositiveDefinite();
  const int d = sigma.dim();
  require_density_dim(d, "default_grid");
  const double stepSd = d == 1 ? 0.05 : 0.1;
  std::vector<GridAxis> axes;
  axes.reserve(d);
  for (int j = 0; j < d; ++j) {
    const double sd = std::sqrt(sigma.mat()(j, j));
    const int count = static_cast<int>(std::lround(10.0 / stepSd)) + 1;
    axes.push_back(GridAxis{-5.0 * sd, stepSd * sd, count});
  }
  return Grid(std::move(axes));
}

Vector silverman_bandwidth(const Matrix& samples) {
  const auto m = samples.rows();
  const int d = static_cast<int>(samples.cols());
  if (m < 2) throw InsufficientSamples("silverman_bandwidth: need >= 2 samples");
  require_density_dim(d, "silverman_bandwidth");
  const double dm = static_cast<double>(m);
  const double factor = d == 1 ? 1.06 * std::pow(dm, -0.2)
                               : std::pow(4.0 / ((d + 2.0) * dm), 1.0 / (d + 4.0));
  Vector h(d);
  for (int j = 0; j < d; ++j) {
    const double mean = samples.col(j).mean();
    const double sd =
        std::sqrt((samples.col(j).array() - mean).square().sum() / (dm - 1.0));
    if (!(sd > 0.0)) {
      throw DegenerateInput("silverman_bandwidth: zero variance in coordinate " +
                            std::to_string(j));
    }
    h(j) = factor * sd;
  }
  return h;
}

double EmpiricalDensity::mass() const {
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum * grid.cellVolume();
}

KdeAccumulator::KdeAccumulator(Grid grid, Vector bandwidth)
    : grid_(std::move(grid)), bandwidth_(std::move(bandwidth)) {
  require_density_dim(grid_.dim(), "KdeAccumulator");
  if (bandwidth_.size() != grid_.dim()) {
    throw InvalidInput("KdeAccumulator: bandwidth dimension mismatch");
  }
  for (int j = 0; j < grid_.dim(); ++j) {
    if (!(bandwidth_(j) > 0.0)) throw InvalidInput("KdeAccumulator: bandwidth must be > 0");
    if (bandwidth_(j) < grid_.axis(j).step / 4.0) {
      throw BandwidthTooSmall("KdeAccumulator: bandwidth " + std::to_string(bandwidth_(j)) +
                              " under a quarter of grid step " +
                              std::to_string(grid_.axis(j).step));
    }
  }
  sums_.assign(grid_.size(), 0.0);
}

void KdeAccumulator::add(const Vector& x) {
  if (x.size() != grid_.dim()) throw InvalidInput("KdeAccumulator: sample dimension mismatch");
  add(x.data());
}

void KdeAccumulator::add(const double* x) {
  ++added_;
  if (grid_.dim() == 1) {
    const GridAxis& ax = grid_.axis(0);
    const double h = bandwidth_(0);
    const double scale = kernel_scale(h);
    const Window w = kernel_window(ax, x[0], h);
    for (int i = w.lo; i <= w.hi; ++i) {
      const double u = (x[0] - ax.coordinate(i)) / h;
      sums_[static_cast<std::size_t>(i)] += scale * std::exp(-0.5 * u * u);
    }
    return;
  }
  const GridAxis& ax0 = grid_.axis(0);
  const GridAxis& ax1 = grid_.axis(1);
  const double h0 = bandwidth_(0), h1 = bandwidth_(1);
  const Window w0 = kernel_window(ax0, x[0], h0);
  const Window w1 = kernel_window(ax1, x[1], h1);
  const double scale = kernel_scale(h0) * kernel_scale(h1);
  for (int i = w0.lo; i <= w0.hi; ++i) {
    const double u0 = (x[0] - ax0.coordinate(i)) / h0;
    const double k0 = std::exp(-0.5 * u0 * u0);
    const std::size_t rowBase = static_cast<std::size_t>(i) * ax1.count;
    for (int j = w1.lo; j <= w1.hi; ++j) {
      const double u1 = (x[1] - ax1.coordinate(j)) / h1;
      sums_[rowBase + j] += scale * k0 * std::exp(-0.5 * u1 * u1);
    }
  }
}

void KdeAccumulator::merge(const KdeAccumulator& other) {
  if (other.sums_.size() != sums_.size() || other.grid_.dim() != grid_.dim() ||
      max_abs(Vector(other.bandwidth_ - bandwidth_)) != 0.0) {
    throw InvalidInput("KdeAccumulator: merge of incompatible accumulators");
  }
  for (std::size_t i = 0; i < sums_.size(); ++i) sums_[i] += other.sums_[i];
  added_ += other.added_;
}

EmpiricalDensity KdeAccumulator::finish() const {
  if (added_ == 0) throw InsufficientSamples("KdeAccumulator: no samples added");
  EmpiricalDensity density{grid_, sums_, bandwidth_, added_};
  const double inv = 1.0 / static_cast<double>(added_);
  for (double& v : density.values) v *= inv;
  return density;
}

EmpiricalDensity kde_density(const Matrix& samples, const Grid& grid, const Vector& bandwidth) {
  const auto m = samples.rows();
  if (static_cast<std::size_t>(m) < tol::kMinDensitySamples) {
    throw InsufficientSamples("kde_density: " + std::to_string(m) + " samples, need " +
                              std::to_string(tol::kMinDensitySamples));
  }
  if (static_cast<int>(samples.cols()) != grid.dim()) {
    throw InvalidInput("kde_density: sample dimension does not match grid");
  }
  KdeAccumulator acc(grid, bandwidth);
  std::vector<double> x(static_cast<std::size_t>(grid.dim()));
  for (Eigen::Index i = 0; i < m; ++i) {
    for (int j = 0; j < grid.dim(); ++j) x[static_cast<std::size_t>(j)] = samples(i, j);
    acc.add(x.data());
  }
  return acc.finish();
}

std::vector<double> gaussian_density(const markov::CovarianceMatrix& sigma, const Grid& grid) {
  sigma.requirePositiveDefinite();
  const int d = sigma.dim();
  require_density_dim(d, "gaussian_density");
  if (grid.dim() != d) throw InvalidInput("gaussian_density: grid dimension mismatch");

  Eigen::LLT<Matrix> llt(sigma.mat());
  if (llt.info() != Eigen::Success) {
    throw NotPositiveDefinite("gaussian_density: Cholesky factorization failed");
  }
  const Matrix inv = llt.solve(Matrix::Identity(d, d));
  const double det = sigma.mat().determinant();
  const double norm = std::pow(2.0 * std::numbers::pi, -0.5 * d) / std::sqrt(det);

  std::vector<double> values;
  values.reserve(grid.size());
  if (d == 1) {
    const GridAxis& ax = grid.axis(0);
    for (int i = 0; i < ax.count; ++i) {
      const double y = ax.coordinate(i);
      values.push_back(norm * std::exp(-0.5 * y * y * inv(0, 0)));
    }
    return values;
  }
  const GridAxis& ax0 = grid.axis(0);
  const GridAxis& ax1 = grid.axis(1);
  Vector y(2);
  for (int i = 0; i < ax0.count; ++i) {
    y(0) = ax0.coordinate(i);
    for (int j = 0; j < ax1.count; ++j) {
      y(1) = ax1.coordinate(j);
      values.push_back(norm * std::exp(-0.5 * y.dot(inv * y)));
    }
  }
  return values;
}

}  // namespace mapllt::sim
