#pragma once

#include <cstddef>

#include "mapllt/deviation.hpp"
#include "mapllt/types.hpp"

// ---------------------------------------------------------------------------
// Streaming moment accumulation (mergeable across chunks) and the empirical
// covariance of the scaled additive component with jackknife standard errors.
// ---------------------------------------------------------------------------

namespace mapllt::sim {

// Count, mean, centered second-moment matrix, and sum of ||x||^3, with a
// numerically stable rank-one update; merge() equals accumulation over the
// concatenated input within tol::kMergeAgreement relative.
class StreamingMoments {
 public:
  explicit StreamingMoments(int dim);

  void add(const Vector& x);
  void add(const double* x);
  void merge(const StreamingMoments& other);

  int dim() const { return dim_; }
  std::size_t count() const { return count_; }
  Vector mean() const;
  Matrix covariance() const;  // sample covariance, n-1 denominator
  double meanAbs3() const;    // average of ||x||^3

 private:
  int dim_;
  std::size_t count_ = 0;
  Vector mean_;
  Matrix m2_;
  double sumAbs3_ = 0.0;
};

struct EmpiricalCovariance {
  markov::CovarianceMatrix cov;
  Matrix se;        // delete-1 jackknife standard error per entry
  Vector mean;      // mean of the scaled samples
  Vector meanSe;    // standard error of that mean
  std::size_t count = 0;
};

// Covariance of t^{-1/2} Y_t from a row-per-path sample matrix. Throws
// InsufficientSamples below tol::kMinCovarianceSamples.
EmpiricalCovariance empirical_covariance(const Matrix& samples, double horizon);

}  // namespace mapllt::sim
