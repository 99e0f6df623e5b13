#include "mapllt/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace mapllt::spectral {
namespace {

constexpr double kScanExclusionRadius = 0.25;  // ball around 0 left out of scans
constexpr double kAnnulusGridStep = 0.05;
constexpr std::size_t kMaxWitnesses = 256;
constexpr double kMaxGridPoints = 2e6;  // desk-scale guard for grid scans

void require_square_matrix(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() < 2) {
    throw InvalidInput(std::string(what) + ": expected a square matrix with n >= 2");
  }
  if (!m.allFinite()) throw InvalidInput(std::string(what) + ": non-finite entry");
}

double spectral_radius(const ComplexMatrix& m) {
  Eigen::ComplexEigenSolver<ComplexMatrix> solver(m, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw NumericalInstability("spectral_radius: eigenvalue iteration failed");
  }
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

// Enumerates the lattice (step * k_1, ..., step * k_d) over the centered box
// of half-width `outer`, passing each point to fn.
void for_each_box_point(int d, double outer, double step,
                        const std::function<void(const Vector&)>& fn) {
  const int half = static_cast<int>(std::floor(outer / step + 1e-9));
  const double points = std::pow(2.0 * half + 1.0, d);
  if (points > kMaxGridPoints) {
    throw InvalidInput("grid scan: " + std::to_string(points) +
                       " points exceed the desk-scale budget");
  }
  std::vector<int> idx(d, -half);
  Vector zeta(d);
  while (true) {
    for (int j = 0; j < d; ++j) zeta(j) = step * idx[j];
    fn(zeta);
    int j = 0;
    while (j < d && ++idx[j] > half) {
      idx[j] = -half;
      ++j;
    }
    if (j == d) break;
  }
}

// Ordinary least squares of y against x; rSquared defined as 1 for a
// perfectly flat response (zero total variation).
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rSquared = 1.0;
};

LineFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys) {
  const std::size_t n = xs.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (syy > 0.0) {
    double ssRes = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
      ssRes += r * r;
    }
    fit.rSquared = std::max(0.0, std::min(1.0, 1.0 - ssRes / syy));
  }
  return fit;
}

using OneStepFn = std::function<ComplexMatrix(const Vector&)>;

markov::CovarianceMatrix covariance_from_one_step(const OneStepFn& oneStep, int d) {
  const auto logModLambda = [&](const Vector& zeta) {
    return std::log(std::abs(dominant_eigen(oneStep(zeta)).lambda));
  };
  const double f0 = logModLambda(Vector::Zero(d));
  const auto hessian = [&](double h) {
    Matrix hess(d, d);
    for (int j = 0; j < d; ++j) {
      Vector e = Vector::Zero(d);
      e(j) = h;
      hess(j, j) = (logModLambda(e) - 2.0 * f0 + logModLambda(-e)) / (h * h);
    }
    for (int j = 0; j < d; ++j) {
      for (int k = j + 1; k < d; ++k) {
        Vector pp = Vector::Zero(d), pm = Vector::Zero(d);
        pp(j) = h;
        pp(k) = h;
        pm(j) = h;
        pm(k) = -h;
        const double mixed = (logModLambda(pp) - logModLambda(pm) - logModLambda(-pm) +
                              logModLambda(-pp)) /
                             (4.0 * h * h);
        hess(j, k) = mixed;
        hess(k, j) = mixed;
      }
    }
    return hess;
  };
  // Central differences are O(h^2); one Richardson stage per adjacent pair,
  // and the two stages must agree.
  const Matrix h0 = hessian(1e-3);
  const Matrix h1 = hessian(5e-4);
  const Matrix h2 = hessian(2.5e-4);
  const Matrix stage1 = (4.0 * h1 - h0) / 3.0;
  const Matrix stage2 = (4.0 * h2 - h1) / 3.0;
  const double disagree = max_abs(Matrix(stage1 - stage2));
  if (disagree > tol::kHessianAgreement * std::max(max_abs(stage2), 1e-12)) {
    throw NumericalInstability("spectral_covariance: Richardson stages differ by " +
                               std::to_string(disagree));
  }
  return markov::CovarianceMatrix(Matrix(-stage2));
}

template <typename Model>
LatticeScan scan_impl(const Model& m, int d, double radius, double gridStep) {
  if (!(gridStep > 0.0) || !(radius > gridStep)) {
    throw InvalidInput("lattice_scan: need 0 < gridStep < radius");
  }
  if (radius <= kScanExclusionRadius) {
    throw InvalidInput("lattice_scan: radius must exceed the excluded ball 0.25");
  }
  LatticeScan result;
  for_each_box_point(d, radius, gridStep, [&](const Vector& zeta) {
    const double norm = zeta.norm();
    if (norm <= kScanExclusionRadius || norm > radius) return;
    const double rho = spectral_radius(fourier::fourier_matrix(m, 1.0, zeta).mat);
    result.maxRadius = std::max(result.maxRadius, rho);
    if (rho > 1.0 - tol::kUnitRadiusSlack) {
      ++result.witnessCount;
      if (result.witnesses.size() < kMaxWitnesses) result.witnesses.push_back(zeta);
    }
  });
  result.isLatticeSuspected = result.witnessCount > 0;
  return result;
}

template <typename Model>
AnnulusDecay decay_impl(const Model& m, int d, int k, double delta, double aOuter,
                        const std::vector<double>& tGrid) {
  if (!(delta > 0.0) || !(aOuter > delta)) {
    throw InvalidInput("annulus_decay: need 0 < delta < A");
  }
  if (tGrid.size() < 3) throw InvalidInput("annulus_decay: need at least 3 horizons");
  for (std::size_t i = 0; i < tGrid.size(); ++i) {
    if (!(tGrid[i] > 0.0) || (i > 0 && !(tGrid[i] > tGrid[i - 1]))) {
      throw InvalidInput("annulus_decay: horizons must be positive and increasing");
    }
  }

  // The frequency grid is shared across horizons; a grid max is a certified
  // lower bound on the continuum sup, which is all a decay fit needs.
  std::vector<Vector> grid;
  for_each_box_point(d, aOuter, kAnnulusGridStep, [&](const Vector& zeta) {
    const double norm = zeta.norm();
    if (norm >= delta - 1e-12 && norm <= aOuter + 1e-12) grid.push_back(zeta);
  });

  AnnulusDecay result;
  result.ts = tGrid;
  result.sValues.reserve(tGrid.size());
  std::vector<double> logS;
  logS.reserve(tGrid.size());
  for (const double t : tGrid) {
    double best = 0.0;
    for (const Vector& zeta : grid) {
      best = std::max(best, std::abs(fourier::characteristic_function(m, k, t, zeta)));
    }
    result.sValues.push_back(best);
    logS.push_back(std::log(std::max(best, 1e-300)));
  }

  const LineFit fit = fit_line(tGrid, logS);
  result.slope = fit.slope;
  result.rSquared = fit.rSquared;
  result.tauHat = std::exp(fit.slope);
  if (result.tauHat >= 1.0 - tol::kUnitRadiusSlack) {
    throw LatticeDetected("annulus_decay: fitted rate " + std::to_string(result.tauHat) +
                          " fails to decay");
  }
  return result;
}

}  // namespace

SpectralDecomposition dominant_eigen(const ComplexMatrix& m) {
  require_square_matrix(m, "dominant_eigen");
  Eigen::ComplexEigenSolver<ComplexMatrix> right(m, /*computeEigenvectors=*/true);
  if (right.info() != Eigen::Success) {
    throw NumericalInstability("dominant_eigen: eigenvalue iteration failed");
  }
  const ComplexVector values = right.eigenvalues();
  int best = 0;
  double top = -1.0, second = -1.0;
  for (int i = 0; i < values.size(); ++i) {
    const double mod = std::abs(values(i));
    if (mod > top) {
      second = top;
      top = mod;
      best = i;
    } else if (mod > second) {
      second = mod;
    }
  }
  if (top - second < tol::kEigenTie) {
    throw EigenTie("dominant_eigen: top moduli differ by " + std::to_string(top - second));
  }

  SpectralDecomposition dec;
  dec.lambda = values(best);
  dec.rightVec = right.eigenvectors().col(best);

  // Left eigenvector: right eigenvector of the plain transpose, matched to
  // the same eigenvalue.
  Eigen::ComplexEigenSolver<ComplexMatrix> left(m.transpose(), /*computeEigenvectors=*/true);
  if (left.info() != Eigen::Success) {
    throw NumericalInstability("dominant_eigen: transpose eigenvalue iteration failed");
  }
  int match = 0;
  double bestDist = std::numeric_limits<double>::infinity();
  for (int i = 0; i < left.eigenvalues().size(); ++i) {
    const double dist = std::abs(left.eigenvalues()(i) - dec.lambda);
    if (dist < bestDist) {
      bestDist = dist;
      match = i;
    }
  }
  dec.leftVec = left.eigenvectors().col(match);

  // Normalize with the bilinear (unconjugated) pairing so the projection is
  // idempotent: left^T right = 1.
  const Complex pairing = (dec.leftVec.transpose() * dec.rightVec)(0, 0);
  if (std::abs(pairing) < 1e-12) {
    throw NumericalInstability("dominant_eigen: dominant pair numerically defective");
  }
  dec.leftVec /= pairing;
  dec.projection = dec.rightVec * dec.leftVec.transpose();
  dec.gap = 1.0 - second / top;
  dec.remainderNorm = max_abs(ComplexMatrix(m - dec.lambda * dec.projection));

  const double residual = max_abs(ComplexVector(m * dec.rightVec - dec.lambda * dec.rightVec));
  if (residual > 1e-10 * std::max(1.0, max_abs(m))) {
    throw NumericalInstability("dominant_eigen: eigenpair residual " + std::to_string(residual));
  }
  return dec;
}

SpectralDecomposition dominant_eigen(const fourier::FourierMatrix& m) {
  return dominant_eigen(m.mat);
}

markov::CovarianceMatrix spectral_covariance(const model::DiscreteMapModel& m) {
  return covariance_from_one_step(
      [&](const Vector& zeta) { return fourier::fourier_one_step(m, zeta).mat; }, m.dim());
}

markov::CovarianceMatrix spectral_covariance(const model::LocalTimeMapModel& m) {
  return covariance_from_one_step(
      [&](const Vector& zeta) { return fourier::fourier_matrix(m, 1.0, zeta).mat; },
      m.projectedDim());
}

LatticeScan lattice_scan(const model::DiscreteMapModel& m, double radius, double gridStep) {
  return scan_impl(m, m.dim(), radius, gridStep);
}

LatticeScan lattice_scan(const model::LocalTimeMapModel& m, double radius, double gridStep) {
  return scan_impl(m, m.projectedDim(), radius, gridStep);
}

AnnulusDecay annulus_decay(const model::DiscreteMapModel& m, int k, double delta, double aOuter,
                           const std::vector<double>& tGrid) {
  return decay_impl(m, m.dim(), k, delta, aOuter, tGrid);
}

AnnulusDecay annulus_decay(const model::LocalTimeMapModel& m, int k, double delta, double aOuter,
                           const std::vector<double>& tGrid) {
  return decay_impl(m, m.projectedDim(), k, delta, aOuter, tGrid);
}

}  // namespace mapllt::spectral
