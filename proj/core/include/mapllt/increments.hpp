#pragma once

// Per-transition increment distributions. Each kind carries a closed-form
// characteristic function, exact low-order moments, and a sampler driven by a
// counter-based stream.

#include <vector>

#include "mapllt/errors.hpp"
#include "mapllt/rng.hpp"
#include "mapllt/types.hpp"

namespace mapllt::model {

class IncrementLaw {
 public:
  enum class Kind { PointMass, Gaussian, UniformBox, Mixture };

  static IncrementLaw pointMass(Vector location);
  static IncrementLaw gaussian(Vector mean, Matrix cov);
  static IncrementLaw uniformBox(Vector lo, Vector hi);
  static IncrementLaw mixture(std::vector<double> weights, std::vector<IncrementLaw> components);

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }

  // E[exp(i <freq, X>)]. Exactly 1 at freq = 0.
  Complex cf(const Vector& freq) const;

  Vector mean() const;
  // Covariance about the law's own mean.
  Matrix covariance() const;

  // E||X||^order for even order in {2, 4}; exact for every kind.
  double normMoment(int order) const;

  // E||X||^3. Exact in dimension 1; in higher dimension a certified upper
  // bound sqrt(E||X||^2 * E||X||^4) (no elementary closed form exists there).
  double absMoment3() const;

  void sample(sim::PhiloxRng& rng, double* out) const;

  // Law of X + delta.
  IncrementLaw shifted(const Vector& delta) const;

  const std::vector<double>& mixtureWeights() const { return weights_; }
  const std::vector<IncrementLaw>& mixtureComponents() const { return components_; }

 private:
  IncrementLaw() = default;

  Kind kind_ = Kind::PointMass;
  int dim_ = 0;
  Vector a_;                    // point mass location
  Vector mean_;                 // gaussian mean
  Matrix cov_;                  // gaussian covariance
  Matrix factor_;               // sampling factor, cov = factor * factor^T
  Vector lo_, hi_;              // uniform box corners
  std::vector<double> weights_;
  std::vector<IncrementLaw> components_;
  std::vector<double> weightCdf_;
};

}  // namespace mapllt::model
