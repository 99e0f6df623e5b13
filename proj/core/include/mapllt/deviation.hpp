#pragma once

// Deviation matrix of an ergodic generator and the asymptotic covariance of
// centered local times. The deviation matrix is the ergodic Green function
// D = integral_0^inf (e^{tG} - 1^T pi) dt, computed here by the fundamental
// matrix identity D = (1^T pi - G)^{-1} - 1^T pi rather than by quadrature.

#include "mapllt/chain.hpp"
#include "mapllt/types.hpp"

namespace mapllt::markov {

// Invariants: rows sum to 0 within tol::kDeviationNull, pi^T D = 0 within the
// same bound, and G D = D G = 1^T pi - I.
class DeviationMatrix {
 public:
  DeviationMatrix(Matrix d, StationaryDistribution pi);
  const Matrix& mat() const { return d_; }
  const Vector& pi() const { return pi_.pi; }
  int states() const { return static_cast<int>(d_.rows()); }

 private:
  Matrix d_;
  StationaryDistribution pi_;
};

// Symmetric positive semidefinite matrix with an explicit positive
// definiteness test (min eigenvalue > tol::kPosDefRatio * max eigenvalue).
// The ratio test alone is scale-free, so a matrix made entirely of
// cancellation residue would pass it; dataScale gives the magnitude of the
// summands that formed the matrix, and eigenvalues at or below
// tol::kCovarianceDustRatio * dataScale are treated as unresolvable zero.
class CovarianceMatrix {
 public:
  explicit CovarianceMatrix(Matrix sigma, double dataScale = 0.0);
  const Matrix& mat() const { return s_; }
  int dim() const { return static_cast<int>(s_.rows()); }
  bool positiveDefinite() const { return positiveDefinite_; }
  // Throws NotPositiveDefinite unless strictly positive definite.
  void requirePositiveDefinite() const;

 private:
  Matrix s_;
  bool positiveDefinite_ = false;
};

DeviationMatrix deviation_matrix(const Generator& g);

// Asymptotic covariance of the first n-1 centered local times,
// Sigma_ij = pi_i D_ij + pi_j D_ji restricted to the leading block.
// Throws NotPositiveDefinite when the projected matrix is singular.
CovarianceMatrix local_time_covariance(const Generator& g);

}  // namespace mapllt::markov
