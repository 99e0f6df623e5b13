#pragma once

#include "mapllt/models.hpp"
#include "mapllt/types.hpp"

// ---------------------------------------------------------------------------
// The Fourier matrix semigroup of the centered additive component:
// entries(k,l) = E_k[ 1_{X_t = l} e^{i <zeta, Y_t>} ]. At zeta = 0 this is the
// transition kernel P_t; for fixed zeta it is a matrix semigroup in t.
// ---------------------------------------------------------------------------

namespace mapllt::fourier {

struct FourierMatrix {
  ComplexMatrix mat;
  double t = 0.0;
  Vector zeta;
};

// One discrete step: e^{-i<zeta,m>} * (P_kl * cf_kl(zeta)); zero where P is.
FourierMatrix fourier_one_step(const model::DiscreteMapModel& m, const Vector& zeta);

// t-step matrix, t a positive integer (power of the one-step matrix).
FourierMatrix fourier_matrix(const model::DiscreteMapModel& m, double t, const Vector& zeta);

// Continuous-time closed form for the projected centered local-time vector:
// with ztilde the zero-padded lift of zeta,
//   e^{-i t <ztilde, pi>} * exp(t (G + i diag(ztilde))).
// Derived, not quoted: validated against a Monte Carlo oracle in the tests
// before anything downstream is allowed to rely on it.
FourierMatrix fourier_matrix(const model::LocalTimeMapModel& m, double t, const Vector& zeta);

// max-abs norm of Y_{t+s}(zeta) - Y_t(zeta) Y_s(zeta); contract <= 1e-10.
double semigroup_residual(const model::DiscreteMapModel& m, double t, double s,
                          const Vector& zeta);
double semigroup_residual(const model::LocalTimeMapModel& m, double t, double s,
                          const Vector& zeta);

// phi_{k,t}(zeta) = row k of the Fourier matrix summed; |phi| <= 1.
Complex characteristic_function(const model::DiscreteMapModel& m, int k, double t,
                                const Vector& zeta);
Complex characteristic_function(const model::LocalTimeMapModel& m, int k, double t,
                                const Vector& zeta);

}  // namespace mapllt::fourier
