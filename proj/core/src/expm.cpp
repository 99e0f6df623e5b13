#include "mapllt/expm.hpp"

#include <string>
#include <unsupported/Eigen/MatrixFunctions>

namespace mapllt::markov {
namespace {
// Beyond this the squaring chain is long enough that entrywise accuracy of the
// stochastic result can no longer be vouched for.
constexpr double kScalingBudget = 1e8;
}  // namespace

StochasticMatrix matrix_exp(const Generator& g, double t) {
  if (!(t >= 0.0)) {
    throw InvalidInput("matrix_exp: time must be >= 0, got " + std::to_string(t));
  }
  const double scale = t * max_abs(g.mat());
  if (scale > kScalingBudget) {
    throw InvalidInput("matrix_exp: t*max|G| = " + std::to_string(scale) +
                       " exceeds scaling budget");
  }
  Matrix e = (t * g.mat()).exp();
  for (int i = 0; i < e.rows(); ++i) {
    for (int j = 0; j < e.cols(); ++j) {
      if (e(i, j) < 0.0) {
        if (e(i, j) < -1e-13) {
          throw NumericalInstability("matrix_exp: entry (" + std::to_string(i) + "," +
                                     std::to_string(j) + ") = " + std::to_string(e(i, j)) +
                                     " below clamp threshold");
        }
        e(i, j) = 0.0;
      }
    }
  }
  return StochasticMatrix(std::move(e));
}

ComplexMatrix complex_exp(const ComplexMatrix& a) {
  if (!a.allFinite()) {
    throw InvalidInput("complex_exp: non-finite entry");
  }
  return a.exp();
}

}  // namespace mapllt::markov
