#include "mapllt/increments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace mapllt::model {
namespace {

constexpr double kWeightSumTol = 1e-12;

double sinc(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

double std_normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

// E|X|^3 for X ~ N(mu, sd^2), elementary in pdf/cdf of the standard normal.
double gaussian_abs_moment3(double mu, double sd) {
  if (sd <= 0.0) return std::abs(mu) * mu * mu;
  const double b = mu / sd;
  const double value =
      2.0 * (b * b + 2.0) * std_normal_pdf(b) + b * (b * b + 3.0) * (2.0 * std_normal_cdf(b) - 1.0);
  return sd * sd * sd * value;
}

// Antiderivative of |x|^3.
double abs_cubic_primitive(double x) { return x * x * x * std::abs(x) / 4.0; }

// E x^k over Uniform(lo, hi), k in {2, 4}.
double uniform_power_moment(double lo, double hi, int k) {
  const double num = (std::pow(hi, k + 1) - std::pow(lo, k + 1)) / (k + 1);
  return num / (hi - lo);
}

}  // namespace

IncrementLaw IncrementLaw::pointMass(Vector location) {
  if (location.size() == 0 || !location.allFinite()) {
    throw InvalidInput("IncrementLaw: point mass needs a finite nonempty location");
  }
  IncrementLaw law;
  law.kind_ = Kind::PointMass;
  law.dim_ = static_cast<int>(location.size());
  law.a_ = std::move(location);
  return law;
}

IncrementLaw IncrementLaw::gaussian(Vector mean, Matrix cov) {
  const int d = static_cast<int>(mean.size());
  if (d == 0 || !mean.allFinite() || !cov.allFinite()) {
    throw InvalidInput("IncrementLaw: gaussian needs finite parameters");
  }
  if (cov.rows() != d || cov.cols() != d) {
    throw InvalidInput("IncrementLaw: gaussian covariance shape mismatch");
  }
  if (max_abs(Matrix(cov - cov.transpose())) > 1e-10 * std::max(1.0, max_abs(cov))) {
    throw InvalidInput("IncrementLaw: gaussian covariance not symmetric");
  }
  IncrementLaw law;
  law.kind_ = Kind::Gaussian;
  law.dim_ = d;
  law.mean_ = std::move(mean);
  law.cov_ = 0.5 * (cov + cov.transpose().eval());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(law.cov_);
  const double floor = -1e-10 * std::max(1.0, eig.eigenvalues().cwiseAbs().maxCoeff());
  if (eig.eigenvalues().minCoeff() < floor) {
    throw NotPositiveDefinite("IncrementLaw: gaussian covariance has negative eigenvalue");
  }
  law.factor_ =
      eig.eigenvectors() * eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
  return law;
}

IncrementLaw IncrementLaw::uniformBox(Vector lo, Vector hi) {
  const int d = static_cast<int>(lo.size());
  if (d == 0 || hi.size() != d || !lo.allFinite() || !hi.allFinite()) {
    throw InvalidInput("IncrementLaw: uniform box needs finite matching corners");
  }
  for (int j = 0; j < d; ++j) {
    if (!(lo(j) < hi(j))) {
      throw InvalidInput("IncrementLaw: uniform box needs lo < hi in coordinate " +
                         std::to_string(j));
    }
  }
  IncrementLaw law;
  law.kind_ = Kind::UniformBox;
  law.dim_ = d;
  law.lo_ = std::move(lo);
  law.hi_ = std::move(hi);
  return law;
}

IncrementLaw IncrementLaw::mixture(std::vector<double> weights,
                                   std::vector<IncrementLaw> components) {
  if (weights.empty() || weights.size() != components.size()) {
    throw InvalidInput("IncrementLaw: mixture needs matching nonempty weights/components");
  }
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw InvalidInput("IncrementLaw: mixture weight must be >= 0");
    sum += w;
  }
  if (std::abs(sum - 1.0) > kWeightSumTol) {
    throw InvalidInput("IncrementLaw: mixture weights sum to " + std::to_string(sum));
  }
  const int d = components.front().dim();
  for (const auto& c : components) {
    if (c.dim() != d) throw InvalidInput("IncrementLaw: mixture components disagree on dimension");
  }
  IncrementLaw law;
  law.kind_ = Kind::Mixture;
  law.dim_ = d;
  law.weights_ = std::move(weights);
  law.components_ = std::move(components);
  law.weightCdf_.resize(law.weights_.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < law.weights_.size(); ++i) {
    acc += law.weights_[i];
    law.weightCdf_[i] = acc;
  }
  law.weightCdf_.back() = 1.0;
  return law;
}

Complex IncrementLaw::cf(const Vector& freq) const {
  if (freq.size() != dim_) {
    throw InvalidInput("IncrementLaw::cf: frequency dimension mismatch");
  }
  if (freq.isZero(0.0)) return Complex{1.0, 0.0};
  switch (kind_) {
    case Kind::PointMass: {
      const double phase = freq.dot(a_);
      return {std::cos(phase), std::sin(phase)};
    }
    case Kind::Gaussian: {
      const double phase = freq.dot(mean_);
      const double decay = std::exp(-0.5 * freq.dot(cov_ * freq));
      return {decay * std::cos(phase), decay * std::sin(phase)};
    }
    case Kind::UniformBox: {
      double amp = 1.0;
      double phase = 0.0;
      for (int j = 0; j < dim_; ++j) {
        const double width = hi_(j) - lo_(j);
        amp *= sinc(0.5 * freq(j) * width);
        phase += freq(j) * 0.5 * (lo_(j) + hi_(j));
      }
      return {amp * std::cos(phase), amp * std::sin(phase)};
    }
    case Kind::Mixture: {
      Complex acc{0.0, 0.0};
      for (std::size_t i = 0; i < components_.size(); ++i) {
        acc += weights_[i] * components_[i].cf(freq);
      }
      return acc;
    }
  }
  throw InvalidInput("IncrementLaw::cf: unknown kind");
}

Vector IncrementLaw::mean() const {
  switch (kind_) {
    case Kind::PointMass:
      return a_;
    case Kind::Gaussian:
      return mean_;
    case Kind::UniformBox:
      return 0.5 * (lo_ + hi_);
    case Kind::Mixture: {
      Vector m = Vector::Zero(dim_);
      for (std::size_t i = 0; i < components_.size(); ++i) {
        m += weights_[i] * components_[i].mean();
      }
      return m;
    }
  }
  throw InvalidInput("IncrementLaw::mean: unknown kind");
}

Matrix IncrementLaw::covariance() const {
  switch (kind_) {
    case Kind::PointMass:
      return Matrix::Zero(dim_, dim_);
    case Kind::Gaussian:
      return cov_;
    case Kind::UniformBox: {
      Matrix c = Matrix::Zero(dim_, dim_);
      for (int j = 0; j < dim_; ++j) {
        const double width = hi_(j) - lo_(j);
        c(j, j) = width * width / 12.0;
      }
      return c;
    }
    case Kind::Mixture: {
      const Vector m = mean();
      Matrix c = Matrix::Zero(dim_, dim_);
      for (std::size_t i = 0; i < components_.size(); ++i) {
        const Vector mi = components_[i].mean();
        c += weights_[i] * (components_[i].covariance() + mi * mi.transpose());
      }
      return c - m * m.transpose();
    }
  }
  throw InvalidInput("IncrementLaw::covariance: unknown kind");
}

double IncrementLaw::normMoment(int order) const {
  if (order != 2 && order != 4) {
    throw InvalidInput("IncrementLaw::normMoment: only orders 2 and 4");
  }
  switch (kind_) {
    case Kind::PointMass: {
      const double n2 = a_.squaredNorm();
      return order == 2 ? n2 : n2 * n2;
    }
    case Kind::Gaussian: {
      const double n2 = mean_.squaredNorm() + cov_.trace();
      if (order == 2) return n2;
      const double quad = mean_.dot(cov_ * mean_);
      const double tr2 = (cov_ * cov_).trace();
      return n2 * n2 + 4.0 * quad + 2.0 * tr2;
    }
    case Kind::UniformBox: {
      if (order == 2) {
        double acc = 0.0;
        for (int j = 0; j < dim_; ++j) acc += uniform_power_moment(lo_(j), hi_(j), 2);
        return acc;
      }
      // E(sum x_j^2)^2 with independent coordinates.
      double acc = 0.0;
      for (int j = 0; j < dim_; ++j) {
        acc += uniform_power_moment(lo_(j), hi_(j), 4);
        for (int k = 0; k < dim_; ++k) {
          if (k != j) {
            acc += uniform_power_moment(lo_(j), hi_(j), 2) * uniform_power_moment(lo_(k), hi_(k), 2);
          }
        }
      }
      return acc;
    }
    case Kind::Mixture: {
      double acc = 0.0;
      for (std::size_t i = 0; i < components_.size(); ++i) {
        acc += weights_[i] * components_[i].normMoment(order);
      }
      return acc;
    }
  }
  throw InvalidInput("IncrementLaw::normMoment: unknown kind");
}

double IncrementLaw::absMoment3() const {
  if (dim_ > 1) {
    if (kind_ == Kind::Mixture) {
      double acc = 0.0;
      for (std::size_t i = 0; i < components_.size(); ++i) {
        acc += weights_[i] * components_[i].absMoment3();
      }
      return acc;
    }
    return std::sqrt(normMoment(2) * normMoment(4));
  }
  switch (kind_) {
    case Kind::PointMass: {
      const double v = std::abs(a_(0));
      return v * v * v;
    }
    case Kind::Gaussian:
      return gaussian_abs_moment3(mean_(0), std::sqrt(cov_(0, 0)));
    case Kind::UniformBox:
      return (abs_cubic_primitive(hi_(0)) - abs_cubic_primitive(lo_(0))) / (hi_(0) - lo_(0));
    case Kind::Mixture: {
      double acc = 0.0;
      for (std::size_t i = 0; i < components_.size(); ++i) {
        acc += weights_[i] * components_[i].absMoment3();
      }
      return acc;
    }
  }
  throw InvalidInput("IncrementLaw::absMoment3: unknown kind");
}

void IncrementLaw::sample(sim::PhiloxRng& rng, double* out) const {
  switch (kind_) {
    case Kind::PointMass:
      for (int j = 0; j < dim_; ++j) out[j] = a_(j);
      return;
    case Kind::Gaussian:
      if (dim_ == 1) {
        out[0] = mean_(0) + factor_(0, 0) * rng.nextNormal();
        return;
      } else {
        Vector z(dim_);
        for (int j = 0; j < dim_; ++j) z(j) = rng.nextNormal();
        Eigen::Map<Vector>(out, dim_) = mean_ + factor_ * z;
        return;
      }
    case Kind::UniformBox:
      for (int j = 0; j < dim_; ++j) {
        out[j] = lo_(j) + rng.nextUnit() * (hi_(j) - lo_(j));
      }
      return;
    case Kind::Mixture: {
      const double u = rng.nextUnit();
      const auto it = std::upper_bound(weightCdf_.begin(), weightCdf_.end(), u);
      const std::size_t idx =
          std::min<std::size_t>(static_cast<std::size_t>(it - weightCdf_.begin()),
                                components_.size() - 1);
      components_[idx].sample(rng, out);
      return;
    }
  }
  throw InvalidInput("IncrementLaw::sample: unknown kind");
}

IncrementLaw IncrementLaw::shifted(const Vector& delta) const {
  if (delta.size() != dim_) {
    throw InvalidInput("IncrementLaw::shifted: shift dimension mismatch");
  }
  switch (kind_) {
    case Kind::PointMass:
      return pointMass(a_ + delta);
    case Kind::Gaussian:
      return gaussian(mean_ + delta, cov_);
    case Kind::UniformBox:
      return uniformBox(lo_ + delta, hi_ + delta);
    case Kind::Mixture: {
      std::vector<IncrementLaw> moved;
      moved.reserve(components_.size());
      for (const auto& c : components_) moved.push_back(c.shifted(delta));
      return mixture(weights_, std::move(moved));
    }
  }
  throw InvalidInput("IncrementLaw::shifted: unknown kind");
}

}  // namespace mapllt::model
