#pragma once

#include <vector>

#include "mapllt/deviation.hpp"
#include "mapllt/fourier.hpp"
#include "mapllt/models.hpp"
#include "mapllt/types.hpp"

// ---------------------------------------------------------------------------
// Dominant spectral data of the one-step Fourier matrix: the eigenvalue curve
// lambda(zeta) whose curvature at 0 is the asymptotic covariance, the rank-one
// eigenprojection with its remainder, the lattice scan, and the annulus-decay
// rate fit.
// ---------------------------------------------------------------------------

namespace mapllt::spectral {

struct SpectralDecomposition {
  Complex lambda;
  // Normalized so leftVec^T rightVec = 1 (plain transpose, no conjugation),
  // making projection = rightVec * leftVec^T idempotent.
  ComplexVector leftVec;
  ComplexVector rightVec;
  ComplexMatrix projection;
  double gap = 0.0;            // 1 - |lambda_2| / |lambda_1|
  double remainderNorm = 0.0;  // max-abs of M - lambda * projection
};

// Full dense eigendecomposition; the dominant eigenvalue is the strictly
// largest modulus. Throws EigenTie when the top two moduli are closer than
// tol::kEigenTie, NumericalInstability when the pair is numerically defective.
SpectralDecomposition dominant_eigen(const ComplexMatrix& m);
SpectralDecomposition dominant_eigen(const fourier::FourierMatrix& m);

// Asymptotic covariance as minus the Hessian of log|lambda| at zeta = 0,
// by central differences over three step sizes with Richardson extrapolation;
// the two extrapolated stages must agree within tol::kHessianAgreement.
markov::CovarianceMatrix spectral_covariance(const model::DiscreteMapModel& m);
markov::CovarianceMatrix spectral_covariance(const model::LocalTimeMapModel& m);

struct LatticeScan {
  bool isLatticeSuspected = false;
  std::vector<Vector> witnesses;  // capped at kMaxWitnesses, see witnessCount
  std::size_t witnessCount = 0;
  double maxRadius = 0.0;  // largest spectral radius seen on the annulus
};

// Scans the grid of the given radius around 0 (excluding a small ball) and
// reports every frequency where the spectral radius of the one-step Fourier
// matrix reaches 1 - tol::kUnitRadiusSlack: such a witness indicates lattice
// structure in the increments.
LatticeScan lattice_scan(const model::DiscreteMapModel& m, double radius, double gridStep);
LatticeScan lattice_scan(const model::LocalTimeMapModel& m, double radius, double gridStep);

struct AnnulusDecay {
  double tauHat = 1.0;  // e^{slope of log s(t) against t}
  double slope = 0.0;
  double rSquared = 0.0;
  std::vector<double> ts;
  std::vector<double> sValues;  // max |phi_{k,t}| over the annulus grid, per t
};

// Max of |phi_{k,t}| over a grid on the annulus delta <= ||zeta|| <= aOuter,
// fitted geometrically in t. Throws LatticeDetected when the fitted rate
// fails to decay.
AnnulusDecay annulus_decay(const model::DiscreteMapModel& m, int k, double delta, double aOuter,
                           const std::vector<double>& tGrid);
AnnulusDecay annulus_decay(const model::LocalTimeMapModel& m, int k, double delta, double aOuter,
                           const std::vector<double>& tGrid);

}  // namespace mapllt::spectral
