#pragma once

// Shared fixtures: the hand-checked chains and walks the suites test against,
// plus small matrix builders. Everything here is deterministic.

#include <algorithm>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mapllt/models.hpp"
#include "mapllt/types.hpp"

namespace testutil {

using mapllt::Matrix;
using mapllt::Vector;

inline Matrix mat2(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

inline Vector vec1(double a) {
  Vector v(1);
  v << a;
  return v;
}

inline Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

// G = [[-1,1],[1,-1]]: pi = (1/2,1/2), deviation +-1/4, projected Sigma 1/4.
inline mapllt::markov::Generator symmetric_generator() {
  return mapllt::markov::Generator(mat2(-1, 1, 1, -1));
}

// G = [[-1,1],[2,-2]]: pi = (2/3,1/3), projected Sigma 2ab/(a+b)^3 = 4/27.
inline mapllt::markov::Generator asymmetric_generator() {
  return mapllt::markov::Generator(mat2(-1, 1, 2, -2));
}

inline mapllt::model::LocalTimeMapModel symmetric_lt() {
  return mapllt::model::LocalTimeMapModel(symmetric_generator());
}

inline mapllt::model::LocalTimeMapModel asymmetric_lt() {
  return mapllt::model::LocalTimeMapModel(asymmetric_generator());
}

// Uniform 2-state chain with arrival-state laws; `sigmaPlus` is the variance
// of the +1 branch. With sigmaPlus = 1 the walk is iid with symmetric centered
// increments and dominant eigenvalue exp(-zeta^2/2) cos(zeta).
inline mapllt::model::DiscreteMapModel iid_gaussian_model(double sigmaPlus = 1.0) {
  using mapllt::model::IncrementLaw;
  mapllt::markov::StochasticMatrix p(mat2(0.5, 0.5, 0.5, 0.5));
  const IncrementLaw minus = IncrementLaw::gaussian(vec1(-1), Matrix::Identity(1, 1));
  const IncrementLaw plus = IncrementLaw::gaussian(vec1(1), Matrix::Identity(1, 1) * sigmaPlus);
  std::vector<std::optional<IncrementLaw>> laws{minus, plus, minus, plus};
  return mapllt::model::DiscreteMapModel(std::move(p), std::move(laws), 1);
}

// Sticky chain (gap 0.3) with zero-drift Gaussian increments; Sigma = 23/6.
inline mapllt::model::DiscreteMapModel markov_gauss_model() {
  using mapllt::model::IncrementLaw;
  mapllt::markov::StochasticMatrix p(mat2(0.9, 0.1, 0.2, 0.8));
  const IncrementLaw minus = IncrementLaw::gaussian(vec1(-0.5), Matrix::Identity(1, 1));
  const IncrementLaw plus = IncrementLaw::gaussian(vec1(1.0), Matrix::Identity(1, 1));
  std::vector<std::optional<IncrementLaw>> laws{minus, plus, minus, plus};
  return mapllt::model::DiscreteMapModel(std::move(p), std::move(laws), 1);
}

// Every transition carries PointMass(+1): the canonical lattice case.
inline mapllt::model::DiscreteMapModel lattice_model() {
  using mapllt::model::IncrementLaw;
  mapllt::markov::StochasticMatrix p(mat2(0.5, 0.5, 0.5, 0.5));
  const IncrementLaw one = IncrementLaw::pointMass(vec1(1));
  std::vector<std::optional<IncrementLaw>> laws{one, one, one, one};
  return mapllt::model::DiscreteMapModel(std::move(p), std::move(laws), 1);
}

inline std::filesystem::path models_dir() { return MAPLLT_MODELS_DIR; }
inline std::filesystem::path configs_dir() { return MAPLLT_CONFIGS_DIR; }

inline std::vector<std::filesystem::path> bundled_model_files() {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(models_dir()))
    if (entry.path().extension() == ".model") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  return files;
}

}  // namespace testutil
