#include "mapllt/fourier.hpp"

#include <cmath>
#include <string>

#include "mapllt/expm.hpp"

namespace mapllt::fourier {
namespace {

constexpr double kIntegerTimeTol = 1e-9;

long require_integer_time(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw InvalidInput("fourier_matrix: time must be positive and finite");
  }
  const double rounded = std::round(t);
  if (std::abs(t - rounded) > kIntegerTimeTol) {
    throw NonIntegerTime("fourier_matrix: discrete model needs integer time, got " +
                         std::to_string(t));
  }
  return static_cast<long>(rounded);
}

ComplexMatrix integer_power(ComplexMatrix base, long exponent) {
  ComplexMatrix acc = ComplexMatrix::Identity(base.rows(), base.cols());
  while (exponent > 0) {
    if (exponent & 1) acc = acc * base;
    exponent >>= 1;
    if (exponent > 0) base = base * base;
  }
  return acc;
}

void require_frequency(const Vector& zeta, int dim, const char* what) {
  if (zeta.size() != dim) {
    throw InvalidInput(std::string(what) + ": frequency dimension " +
                       std::to_string(zeta.size()) + ", expected " + std::to_string(dim));
  }
  if (!zeta.allFinite()) throw InvalidInput(std::string(what) + ": non-finite frequency");
}

int require_state(int k, int n, const char* what) {
  if (k < 0 || k >= n) {
    throw InvalidInput(std::string(what) + ": start state " + std::to_string(k) +
                       " out of range");
  }
  return k;
}

}  // namespace

FourierMatrix fourier_one_step(const model::DiscreteMapModel& m, const Vector& zeta) {
  require_frequency(zeta, m.dim(), "fourier_one_step");
  const int n = m.states();
  // Centering enters as the scalar phase of one step of -m.
  const double phase = -zeta.dot(m.drift());
  const Complex centering{std::cos(phase), std::sin(phase)};
  ComplexMatrix mat = ComplexMatrix::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    for (int l = 0; l < n; ++l) {
      if (m.hasLaw(k, l)) {
        mat(k, l) = m.chain().mat()(k, l) * m.law(k, l).cf(zeta) * centering;
      }
    }
  }
  return FourierMatrix{std::move(mat), 1.0, zeta};
}

FourierMatrix fourier_matrix(const model::DiscreteMapModel& m, double t, const Vector& zeta) {
  const long steps = require_integer_time(t);
  FourierMatrix oneStep = fourier_one_step(m, zeta);
  return FourierMatrix{integer_power(std::move(oneStep.mat), steps), static_cast<double>(steps),
                       zeta};
}

FourierMatrix fourier_matrix(const model::LocalTimeMapModel& m, double t, const Vector& zeta) {
  require_frequency(zeta, m.projectedDim(), "fourier_matrix");
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw InvalidInput("fourier_matrix: time must be >= 0 and finite");
  }
  const int n = m.states();
  Vector lifted = Vector::Zero(n);  // dropped coordinate carries frequency 0
  lifted.head(n - 1) = zeta;
  ComplexMatrix arg = t * m.generator().mat().cast<Complex>();
  for (int j = 0; j < n; ++j) arg(j, j) += Complex{0.0, t * lifted(j)};
  const double phase = -t * lifted.dot(m.drift());
  const Complex centering{std::cos(phase), std::sin(phase)};
  return FourierMatrix{centering * markov::complex_exp(arg), t, zeta};
}

namespace {

template <typename Model>
double residual_impl(const Model& m, double t, double s, const Vector& zeta) {
  const FourierMatrix whole = fourier_matrix(m, t + s, zeta);
  const FourierMatrix left = fourier_matrix(m, t, zeta);
  const FourierMatrix right = fourier_matrix(m, s, zeta);
  return max_abs(ComplexMatrix(whole.mat - left.mat * right.mat));
}

}  // namespace

double semigroup_residual(const model::DiscreteMapModel& m, double t, double s,
                          const Vector& zeta) {
  return residual_impl(m, t, s, zeta);
}

double semigroup_residual(const model::LocalTimeMapModel& m, double t, double s,
                          const Vector& zeta) {
  return residual_impl(m, t, s, zeta);
}

Complex characteristic_function(const model::DiscreteMapModel& m, int k, double t,
                                const Vector& zeta) {
  require_state(k, m.states(), "characteristic_function");
  return fourier_matrix(m, t, zeta).mat.row(k).sum();
}

Complex characteristic_function(const model::LocalTimeMapModel& m, int k, double t,
                                const Vector& zeta) {
  require_state(k, m.states(), "characteristic_function");
  return fourier_matrix(m, t, zeta).mat.row(k).sum();
}

}  // namespace mapllt::fourier
