#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "mapllt/chain.hpp"
#include "mapllt/harness/config.hpp"
#include "mapllt/harness/model_io.hpp"
#include "mapllt/harness/ratefit.hpp"
#include "mapllt/simulate.hpp"
#include "mapllt/spectral.hpp"
#include "mapllt/types.hpp"

namespace mapllt::harness {

// Shared acceptance thresholds: deterministic covariance routes must agree to
// kRouteRelTol relative, Monte Carlo estimates to kMcZTol jackknife SEs.
constexpr double kRouteRelTol = 1e-4;
constexpr double kMcZTol = 3.0;

// Returns a copy whose discrete model is centered; local-time models are
// centered by construction.  Every experiment entry point applies this first.
ParsedModel centered(const ParsedModel& pm);

// Exact asymptotic covariance (fundamental-matrix route for both families)
// and the independent spectral-Hessian route.  exact_covariance keeps the
// wrapper, whose definiteness test knows the data scale; use it wherever a
// degenerate limit must be recognized.
markov::CovarianceMatrix exact_covariance(const ParsedModel& pm);
Matrix exact_sigma(const ParsedModel& pm);
Matrix spectral_sigma(const ParsedModel& pm);

// E_k[Y_t] for the centered model started at `state` (0-based).  Nonzero for
// finite t: the chain starts at a point mass, not at stationarity, so the
// additive component carries a transient mean that decays with the mixing
// time.  Monte Carlo means must be tested against this, not against zero.
Vector exact_transient_mean(const ParsedModel& pm, int state, double t);

// Cov_k(t^{-1/2} Y_t) for the centered model: the Hessian of -log|phi_{k,t}|
// at zero, taken through the exact Fourier-matrix routes.  Differs from the
// asymptotic covariance by an O(1/t) transient, which at desk-scale t is
// several Monte Carlo standard errors wide — empirical covariances must be
// tested against this, not against the limit.
Matrix exact_transient_covariance(const ParsedModel& pm, int state, double t);

// ---------------------------------------------------------------------------
// CLT verification

struct CltCell {
  double t = 0.0;
  std::size_t sampleCount = 0;
  Matrix empirical;  // covariance of t^{-1/2} Y_t
  Matrix se;         // jackknife SE per entry
  Vector mean;       // mean of t^{-1/2} Y_t
  Vector meanSe;
  Vector exactMean;  // transient mean, same scaling
  Matrix exactCov;   // transient covariance, same scaling
  double maxCovZ = 0.0;
  double maxMeanZ = 0.0;
  bool pass = false;
};

struct CltReport {
  Matrix exactSigma;
  Matrix spectralSigma;
  double routeRelError = 0.0;
  std::vector<CltCell> cells;
  bool pass = false;
};

CltReport run_clt(const ParsedModel& pm, const ExperimentConfig& cfg,
                  const sim::ParallelOptions& par);

// ---------------------------------------------------------------------------
// characteristic-function rate (deterministic)

struct CfRateReport {
  Matrix sigma;
  std::vector<double> ts;
  std::vector<double> errors;  // e(t) = max over the zeta grid
  RateFit fit;
};

// e(t) = max_{||zeta|| <= radius} |phi_{k,t}(t^{-1/2} zeta) - e^{-<zeta, Sigma zeta>/2}|.
double cf_sup_error(const ParsedModel& pm, int state, double t, const Matrix& sigma,
                    double radius, double step);

CfRateReport run_cf_rate(const ParsedModel& pm, const ExperimentConfig& cfg);

// ---------------------------------------------------------------------------
// density experiment

struct DensityCell {
  double t = 0.0;
  std::size_t sampleCount = 0;
  double supErrorDensity = 0.0;  // at the configured bandwidth
  double supErrorHalfBw = 0.0;   // bandwidth sweep: x0.5 and x2
  double supErrorDoubleBw = 0.0;
  double supErrorCF = 0.0;
  std::optional<double> boundaryTerm;  // local-time models only
  double kdeMass = 0.0;
  Vector bandwidth;
};

struct LltReport {
  Matrix sigma;
  double tailMassBound = 0.0;  // Gaussian mass beyond the +-5 sigma grid
  std::vector<DensityCell> cells;
  RateFit densityFit;
  RateFit cfFit;
};

LltReport run_llt_density(const ParsedModel& pm, const ExperimentConfig& cfg,
                          const sim::ParallelOptions& par);

// sup over the complement of the scaled support region t^{-1/2} D_t of the
// limit density eta_Sigma, via the minimum Mahalanobis distance to a face.
double boundary_term(const model::LocalTimeMapModel& m, double t);

// ---------------------------------------------------------------------------
// lattice scan

struct LatticeReport {
  bool isLatticeSuspected = false;
  std::size_t witnessCount = 0;
  double maxRadius = 0.0;
  std::vector<Vector> witnesses;  // capped; witnessCount is exact
};

LatticeReport run_lattice_scan(const ParsedModel& pm, const ExperimentConfig& cfg);

// ---------------------------------------------------------------------------
// model summary (CLI `analyze` / `spectral`)

struct AnalyzeReport {
  Vector pi;
  Vector drift;  // declared drift before centering (discrete); pi for local times
  Matrix exactSigma;
  Matrix spectralSigma;
  Matrix mcSigma;
  Matrix mcSe;
  double routeRelError = 0.0;
  double maxCovZ = 0.0;
  bool irreducible = false;
  std::optional<bool> aperiodic;            // discrete chains only
  std::vector<bool> subgeneratorIrreducible;  // local-time models only
  double mcHorizon = 0.0;
  std::size_t mcSamples = 0;
  bool agree = false;
};

AnalyzeReport run_analyze(const ParsedModel& pm, std::uint64_t seed,
                          const sim::ParallelOptions& par);

struct SpectralReport {
  double gapAtZero = 0.0;
  double lambdaSecondModulus = 0.0;
  std::vector<double> axis;                 // signed offsets along each coordinate axis
  std::vector<std::vector<double>> radiusByAxis;  // spectral radius of Y1 along each axis
  spectral::AnnulusDecay annulus;
};

SpectralReport run_spectral(const ParsedModel& pm, const ExperimentConfig& cfg);

}  // namespace mapllt::harness
