#include "mapllt/moments.hpp"

#include <cmath>
#include <string>

namespace mapllt::sim {

StreamingMoments::StreamingMoments(int dim) : dim_(dim) {
  if (dim < 1) throw InvalidInput("StreamingMoments: dimension must be >= 1");
  mean_ = Vector::Zero(dim);
  m2_ = Matrix::Zero(dim, dim);
}

void StreamingMoments::add(const Vector& x) {
  if (x.size() != dim_) throw InvalidInput("StreamingMoments: dimension mismatch");
  add(x.data());
}

void StreamingMoments::add(const double* x) {
  const Eigen::Map<const Vector> v(x, dim_);
  ++count_;
  const Vector delta = v - mean_;
  mean_ += delta / static_cast<double>(count_);
  // delta (x - new mean)^T written as a symmetric rank-one update.
  m2_ += (static_cast<double>(count_ - 1) / static_cast<double>(count_)) * delta *
         delta.transpose();
  const double norm = v.norm();
  sumAbs3_ += norm * norm * norm;
}

void StreamingMoments::merge(const StreamingMoments& other) {
  if (other.dim_ != dim_) throw InvalidInput("StreamingMoments: merge dimension mismatch");
  if (other.count_ == 0) return;
  if (count_ == 0) {
    *this = other;
    return;
  }
  const double nA = static_cast<double>(count_);
  const double nB = static_cast<double>(other.count_);
  const double n = nA + nB;
  const Vector delta = other.mean_ - mean_;
  mean_ += delta * (nB / n);
  m2_ += other.m2_ + (nA * nB / n) * delta * delta.transpose();
  sumAbs3_ += other.sumAbs3_;
  count_ += other.count_;
}

Vector StreamingMoments::mean() const {
  if (count_ == 0) throw InsufficientSamples("StreamingMoments: empty accumulator");
  return mean_;
}

Matrix StreamingMoments::covariance() const {
  if (count_ < 2) throw InsufficientSamples("StreamingMoments: need >= 2 samples");
  Matrix cov = m2_ / static_cast<double>(count_ - 1);
  return 0.5 * (cov + cov.transpose().eval());
}

double StreamingMoments::meanAbs3() const {
  if (count_ == 0) throw InsufficientSamples("StreamingMoments: empty accumulator");
  return sumAbs3_ / static_cast<double>(count_);
}

EmpiricalCovariance empirical_covariance(const Matrix& samples, double horizon) {
  const std::size_t m = static_cast<std::size_t>(samples.rows());
  const int d = static_cast<int>(samples.cols());
  if (m < tol::kMinCovarianceSamples) {
    throw InsufficientSamples("empirical_covariance: " + std::to_string(m) + " samples, need " +
                              std::to_string(tol::kMinCovarianceSamples));
  }
  if (d < 1) throw InvalidInput("empirical_covariance: empty sample rows");
  if (!(horizon > 0.0)) throw InvalidInput("empirical_covariance: horizon must be > 0");

  const double scale = 1.0 / std::sqrt(horizon);
  const Vector mean = samples.colwise().mean() * scale;
  Matrix centered = samples * scale;
  centered.rowwise() -= mean.transpose();

  const double dm = static_cast<double>(m);
  const Matrix scatter = centered.transpose() * centered;
  const Matrix cov = scatter / (dm - 1.0);

  // Delete-1 jackknife per entry: dropping row i shifts the centered scatter
  // by u_i v_i * m/(m-1), since the column means move by -u_i/(m-1).
  Matrix se(d, d);
  for (int a = 0; a < d; ++a) {
    for (int b = a; b < d; ++b) {
      const double sAb = scatter(a, b);
      double meanLoo = 0.0, m2Loo = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        const double loo =
            (sAb - centered(static_cast<Eigen::Index>(i), a) *
                       centered(static_cast<Eigen::Index>(i), b) * dm / (dm - 1.0)) /
            (dm - 2.0);
        const double delta = loo - meanLoo;
        meanLoo += delta / static_cast<double>(i + 1);
        m2Loo += delta * (loo - meanLoo);
      }
      const double entry = std::sqrt((dm - 1.0) / dm * m2Loo);
      se(a, b) = entry;
      se(b, a) = entry;
    }
  }

  Vector meanSe(d);
  for (int a = 0; a < d; ++a) meanSe(a) = std::sqrt(cov(a, a) / dm);

  return EmpiricalCovariance{markov::CovarianceMatrix(Matrix(0.5 * (cov + cov.transpose()))),
                             std::move(se), mean, std::move(meanSe), m};
}

}  // namespace mapllt::sim
