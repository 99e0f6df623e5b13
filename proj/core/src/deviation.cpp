#include "mapllt/deviation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mapllt::markov {

DeviationMatrix::DeviationMatrix(Matrix d, StationaryDistribution pi)
    : d_(std::move(d)), pi_(std::move(pi)) {
  const double rowNull = d_.rowwise().sum().cwiseAbs().maxCoeff();
  if (rowNull > tol::kDeviationNull) {
    throw NumericalInstability("DeviationMatrix: row sums reach " + std::to_string(rowNull));
  }
  const double piNull = (pi_.pi.transpose() * d_).cwiseAbs().maxCoeff();
  if (piNull > tol::kDeviationNull) {
    throw NumericalInstability("DeviationMatrix: pi^T D reaches " + std::to_string(piNull));
  }
}

CovarianceMatrix::CovarianceMatrix(Matrix sigma, double dataScale) : s_(std::move(sigma)) {
  if (s_.rows() != s_.cols() || s_.rows() < 1) {
    throw InvalidInput("CovarianceMatrix: expected a nonempty square matrix");
  }
  const double scale = std::max(1.0, max_abs(s_));
  if (max_abs(Matrix(s_ - s_.transpose())) > tol::kCovSymmetry * scale) {
    throw InvalidInput("CovarianceMatrix: asymmetry above tolerance");
  }
  s_ = 0.5 * (s_ + s_.transpose().eval());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(s_);
  const double maxEig = eig.eigenvalues().maxCoeff();
  const double minEig = eig.eigenvalues().minCoeff();
  // Zero is a legitimate covariance (deterministic component); only a
  // genuinely negative spectrum is rejected.
  if (minEig < -tol::kCovSymmetry * std::max(1.0, std::abs(maxEig))) {
    throw NotPositiveDefinite("CovarianceMatrix: negative eigenvalue " + std::to_string(minEig));
  }
  const double floor =
      std::max(tol::kPosDefRatio * maxEig, tol::kCovarianceDustRatio * dataScale);
  positiveDefinite_ = maxEig > 0.0 && minEig > floor;
}

void CovarianceMatrix::requirePositiveDefinite() const {
  if (!positiveDefinite_) {
    throw NotPositiveDefinite("CovarianceMatrix: not positive definite");
  }
}

DeviationMatrix deviation_matrix(const Generator& g) {
  const StationaryDistribution pi = stationary(g);
  const int n = g.states();
  const Matrix ones_pi = Vector::Ones(n) * pi.pi.transpose();
  Eigen::PartialPivLU<Matrix> lu(ones_pi - g.mat());
  const Matrix inv = lu.solve(Matrix::Identity(n, n));
  const double residual = max_abs(Matrix((ones_pi - g.mat()) * inv - Matrix::Identity(n, n)));
  if (residual > 1e-8) {
    throw SingularSystem("deviation_matrix: fundamental system residual " +
                         std::to_string(residual));
  }
  return DeviationMatrix(inv - ones_pi, pi);
}

CovarianceMatrix local_time_covariance(const Generator& g) {
  const DeviationMatrix dev = deviation_matrix(g);
  const int n = g.states();
  Matrix full(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      full(i, j) = dev.pi()(i) * dev.mat()(i, j) + dev.pi()(j) * dev.mat()(j, i);
    }
  }
  CovarianceMatrix sigma(full.topLeftCorner(n - 1, n - 1), 2.0 * max_abs(dev.mat()));
  sigma.requirePositiveDefinite();
  return sigma;
}

}  // namespace mapllt::markov
