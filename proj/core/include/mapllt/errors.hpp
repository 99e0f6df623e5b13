#pragma once

#include <stdexcept>
#include <string>

namespace mapllt {

// Base class for every failure the library reports. Messages name the failing
// invariant and, where available, the offending input location.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input fails a structural precondition (shape, sign, normalization).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// Driving chain or generator is not irreducible.
class NotIrreducible : public Error {
 public:
  using Error::Error;
};

// A linear system that should be regular came out singular.
class SingularSystem : public Error {
 public:
  using Error::Error;
};

// A matrix required to be positive definite is not.
class NotPositiveDefinite : public Error {
 public:
  using Error::Error;
};

// A vector expected on the zero-sum hyperplane is off it.
class NotInHyperplane : public Error {
 public:
  using Error::Error;
};

// Discrete-time operation asked for at a fractional time.
class NonIntegerTime : public Error {
 public:
  using Error::Error;
};

// Top two eigenvalue moduli are numerically indistinguishable.
class EigenTie : public Error {
 public:
  using Error::Error;
};

// Finite-difference or extrapolation stages disagree beyond tolerance.
class NumericalInstability : public Error {
 public:
  using Error::Error;
};

// Frequency scan found modulus-one behaviour away from the origin.
class LatticeDetected : public Error {
 public:
  using Error::Error;
};

// Estimator invoked with fewer samples than its floor.
class InsufficientSamples : public Error {
 public:
  using Error::Error;
};

// Kernel bandwidth below the resolution of the evaluation grid.
class BandwidthTooSmall : public Error {
 public:
  using Error::Error;
};

// Regression input unusable (too few points, nonpositive values, ...).
class DegenerateInput : public Error {
 public:
  using Error::Error;
};

}  // namespace mapllt
