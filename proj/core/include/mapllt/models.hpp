#pragma once

#include <optional>
#include <vector>

#include "mapllt/chain.hpp"
#include "mapllt/deviation.hpp"
#include "mapllt/increments.hpp"
#include "mapllt/types.hpp"

// ---------------------------------------------------------------------------
// The two model families: discrete-time Markov random walks with
// per-transition increment laws, and continuous-time jump processes carrying
// their local-time vector on the simplex <L, 1> = t.
// ---------------------------------------------------------------------------

namespace mapllt::model {

// Discrete-time model: chain P plus one increment law per positive transition.
// The drift m = sum_k pi_k sum_l P_kl mean(law_kl) is computed at construction.
class DiscreteMapModel {
 public:
  DiscreteMapModel(markov::StochasticMatrix chain,
                   std::vector<std::optional<IncrementLaw>> laws, int dim);

  const markov::StochasticMatrix& chain() const { return chain_; }
  bool hasLaw(int from, int to) const;
  const IncrementLaw& law(int from, int to) const;
  int states() const { return chain_.states(); }
  int dim() const { return dim_; }
  const markov::StationaryDistribution& stationary() const { return pi_; }
  const Vector& drift() const { return drift_; }

 private:
  markov::StochasticMatrix chain_;
  std::vector<std::optional<IncrementLaw>> laws_;  // row-major, size n*n
  int dim_;
  markov::StationaryDistribution pi_;
  Vector drift_;
};

// Continuous-time model: the additive component is the local-time vector L_t;
// its drift per unit time is exactly the stationary distribution.
class LocalTimeMapModel {
 public:
  explicit LocalTimeMapModel(markov::Generator gen);

  const markov::Generator& generator() const { return gen_; }
  int states() const { return gen_.states(); }
  int projectedDim() const { return gen_.states() - 1; }
  const markov::StationaryDistribution& stationary() const { return pi_; }
  const Vector& drift() const { return pi_.pi; }

 private:
  markov::Generator gen_;
  markov::StationaryDistribution pi_;
};

// Shifts every increment law by -m so the returned model has drift 0 within
// 1e-12.  A model already inside that tolerance is returned unchanged, which
// makes the operation idempotent bit-for-bit on law parameters.
DiscreteMapModel center(const DiscreteMapModel& m);

Vector stationary_mean(const DiscreteMapModel& m);
Vector stationary_mean(const LocalTimeMapModel& m);

// Uniform bound on E_k ||Y_v||^order over v in (0,1], order in {2, 3}.
// Discrete models: exact one-step conditional moment, maximized over k.
// Local-time models: ||L_v - v pi|| <= v sqrt(n), so n^{order/2} is a bound.
double moment_bound(const DiscreteMapModel& m, int order);
double moment_bound(const LocalTimeMapModel& m, int order);

// Coordinates on the hyperplane <y, 1> = 0: drop the last coordinate, and
// reconstruct it as minus the sum of the others.  project(lift(y')) == y'
// exactly; lift(project(y)) == y on the hyperplane.
Vector project_local_times(const Vector& y);
Vector lift_local_times(const Vector& yProjected);

// Interior test: <normal, y> < offset (strict).
struct HalfSpace {
  Vector normal;
  double offset;
};

// Open convex polytope as an intersection of half-spaces.
class SupportRegion {
 public:
  explicit SupportRegion(std::vector<HalfSpace> faces);

  const std::vector<HalfSpace>& faces() const { return faces_; }
  bool contains(const Vector& y) const;
  // Region of the rescaled variable z = c*y (offsets multiply by c).
  SupportRegion scaled(double c) const;

 private:
  std::vector<HalfSpace> faces_;
};

// Support of the projected centered local-time vector at horizon t:
// slabs -m_j t < y'_j < (1-m_j) t for j < n, plus the half-space
// <y', 1> < m_n t forced by the last (reconstructed) coordinate.
SupportRegion support_region(const LocalTimeMapModel& m, double t);

// Asymptotic covariance of n^{-1/2} Y_n for a centered discrete model, via
// the fundamental matrix: the within-step covariance plus the lag-zero edge
// scatter plus both cross-lag sums.
markov::CovarianceMatrix asymptotic_covariance_exact(const DiscreteMapModel& m);

}  // namespace mapllt::model
