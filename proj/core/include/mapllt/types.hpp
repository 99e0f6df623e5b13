#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>

namespace mapllt {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using Complex = std::complex<double>;

// Entrywise max-abs norm. All residual contracts in this library use it.
inline double max_abs(const Matrix& a) { return a.cwiseAbs().maxCoeff(); }
inline double max_abs(const ComplexMatrix& a) { return a.cwiseAbs().maxCoeff(); }
inline double max_abs(const Vector& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }
inline double max_abs(const ComplexVector& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

// Shared numeric tolerances. Each constant is a contract, not a tuning knob.
namespace tol {
constexpr int kMinStates = 2;
constexpr int kMaxStates = 64;
constexpr double kRowSum = 1e-12;            // stochastic / generator row sums
constexpr double kStationaryResidual = 1e-10;
constexpr double kDeviationNull = 1e-8;      // row sums of D and pi*D
constexpr double kCovSymmetry = 1e-10;
constexpr double kPosDefRatio = 1e-10;       // min eig > ratio * max eig
constexpr double kCovarianceDustRatio = 1e-24;  // eigs under ratio * data scale are cancellation residue
constexpr double kCenteredDrift = 1e-12;
constexpr double kHyperplane = 1e-9;
constexpr double kFourierEntrySlack = 1e-12;
constexpr double kSemigroupResidual = 1e-10;
constexpr double kEigenTie = 1e-12;
constexpr double kHessianAgreement = 1e-5;   // relative, between Richardson stages
constexpr double kUnitRadiusSlack = 1e-6;    // lattice witness threshold 1 - slack
constexpr double kLocalTimeConservation = 1e-9;
constexpr double kMergeAgreement = 1e-10;    // streaming moment merge, relative
constexpr double kKdeMassLow = 0.95;
constexpr double kKdeMassHigh = 1.01;
constexpr std::size_t kMinCovarianceSamples = 1000;
constexpr std::size_t kMinDensitySamples = 10000;
}  // namespace tol

}  // namespace mapllt
