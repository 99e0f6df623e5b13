#include <doctest.h>

#include <cmath>
#include <vector>

#include "helpers.hpp"
#include "mapllt/errors.hpp"
#include "mapllt/expm.hpp"
#include "mapllt/fourier.hpp"
#include "mapllt/rng.hpp"
#include "mapllt/simulate.hpp"

using namespace mapllt;
using namespace mapllt::fourier;
using testutil::mat2;
using testutil::vec1;

TEST_SUITE("fourier") {

TEST_CASE("zero frequency reduces to the transition kernel") {
  const auto discrete = model::center(testutil::markov_gauss_model());
  const auto oneStep = fourier_one_step(discrete, Vector::Zero(1));
  CHECK(max_abs(ComplexMatrix(oneStep.mat - discrete.chain().mat().cast<Complex>())) < 1e-14);

  const auto lt = testutil::asymmetric_lt();
  const auto at0 = fourier_matrix(lt, 2.5, Vector::Zero(1));
  const Matrix pt = markov::matrix_exp(lt.generator(), 2.5).mat();
  CHECK(max_abs(ComplexMatrix(at0.mat - pt.cast<Complex>())) < 1e-12);
}

TEST_CASE("point-mass entries are phases times transition weights") {
  const auto lattice = testutil::lattice_model();  // uncentered: every jump is +1
  const double zeta = 0.8;
  const auto one = fourier_one_step(model::center(lattice), vec1(zeta));
  // centered laws are point(0), so the matrix is exactly P for every zeta
  CHECK(max_abs(ComplexMatrix(one.mat - lattice.chain().mat().cast<Complex>())) < 1e-14);
}

// The continuous-time closed form is derived, not quoted.  This is its gate:
// a direct Monte Carlo estimate of E_k[1_{X_t=l} e^{i zeta Y_t}] must agree
// entry by entry before anything downstream may rely on the formula.
TEST_CASE("local-time matrix agrees with Monte Carlo") {
  const auto lt = testutil::asymmetric_lt();
  const double t = 1.0, zeta = 1.0;
  const auto exact = fourier_matrix(lt, t, vec1(zeta));

  const std::size_t paths = 400000;
  ComplexMatrix mc = ComplexMatrix::Zero(2, 2);
  Matrix sumSqRe = Matrix::Zero(2, 2), sumSqIm = Matrix::Zero(2, 2);
  for (int k = 0; k < 2; ++k) {
    for (std::size_t i = 0; i < paths; ++i) {
      sim::PhiloxRng rng({9001, static_cast<std::uint32_t>(k)},
                         static_cast<std::uint32_t>(i));
      const auto path = sim::simulate_local_time_path(lt, k, t, rng);
      const Complex value = std::polar(1.0, zeta * path.additive(0));
      mc(k, path.endState) += value;
      sumSqRe(k, path.endState) += value.real() * value.real();
      sumSqIm(k, path.endState) += value.imag() * value.imag();
    }
  }
  for (int k = 0; k < 2; ++k)
    for (int l = 0; l < 2; ++l) {
      const Complex estimate = mc(k, l) / static_cast<double>(paths);
      const double seRe = std::sqrt(
          (sumSqRe(k, l) / paths - estimate.real() * estimate.real()) / paths);
      const double seIm = std::sqrt(
          (sumSqIm(k, l) / paths - estimate.imag() * estimate.imag()) / paths);
      REQUIRE(std::abs(estimate.real() - exact.mat(k, l).real()) < 3.5 * seRe);
      REQUIRE(std::abs(estimate.imag() - exact.mat(k, l).imag()) < 3.5 * seIm);
    }
}

// iid rows: phi factorizes through the scalar cf, phi_n = (e^{-z^2/2} cos z)^n.
TEST_CASE("discrete characteristic function closed form") {
  const auto iid = model::center(testutil::iid_gaussian_model());
  for (const double zeta : {0.3, 0.7, 1.4}) {
    const Complex lambda = std::exp(-0.5 * zeta * zeta) * std::cos(zeta);
    for (const long n : {1L, 4L, 32L}) {
      const Complex viaMatrix = characteristic_function(iid, 0, static_cast<double>(n),
                                                        vec1(zeta));
      const Complex direct = std::pow(lambda, static_cast<double>(n));
      REQUIRE(std::abs(viaMatrix - direct) < 1e-12);
    }
  }
}

TEST_CASE("local-time characteristic function agrees with Monte Carlo") {
  const auto lt = testutil::symmetric_lt();
  const double t = 3.0, zeta = 0.9;
  const Complex exact = characteristic_function(lt, 0, t, vec1(zeta));

  const std::size_t paths = 300000;
  Complex sum = 0.0;
  double sumSqRe = 0.0, sumSqIm = 0.0;
  for (std::size_t i = 0; i < paths; ++i) {
    sim::PhiloxRng rng({9002, 0}, static_cast<std::uint32_t>(i));
    const auto path = sim::simulate_local_time_path(lt, 0, t, rng);
    const Complex v = std::polar(1.0, zeta * path.additive(0));
    sum += v;
    sumSqRe += v.real() * v.real();
    sumSqIm += v.imag() * v.imag();
  }
  const Complex estimate = sum / static_cast<double>(paths);
  const double seRe = std::sqrt((sumSqRe / paths - estimate.real() * estimate.real()) / paths);
  const double seIm = std::sqrt((sumSqIm / paths - estimate.imag() * estimate.imag()) / paths);
  CHECK(std::abs(estimate.real() - exact.real()) < 3.5 * seRe);
  CHECK(std::abs(estimate.imag() - exact.imag()) < 3.5 * seIm);
}

TEST_CASE("modulus bound and entry domination") {
  const auto discrete = model::center(testutil::markov_gauss_model());
  const auto lt = testutil::asymmetric_lt();
  sim::PhiloxRng rng({9003, 0}, 0);
  for (int rep = 0; rep < 50; ++rep) {
    const double zeta = 6.0 * rng.nextUnit() - 3.0;
    const double t = 1.0 + (rng.nextU32() % 10);

    const Complex phiD = characteristic_function(discrete, rep % 2, t, vec1(zeta));
    REQUIRE(std::abs(phiD) <= 1.0 + tol::kFourierEntrySlack);
    const Complex phiL = characteristic_function(lt, rep % 2, t, vec1(zeta));
    REQUIRE(std::abs(phiL) <= 1.0 + tol::kFourierEntrySlack);

    // |entry(k,l)| <= P_t(k,l): the twist only rotates mass
    const auto fm = fourier_matrix(discrete, t, vec1(zeta));
    const auto p0 = fourier_matrix(discrete, t, Vector::Zero(1));
    for (int k = 0; k < 2; ++k)
      for (int l = 0; l < 2; ++l)
        REQUIRE(std::abs(fm.mat(k, l)) <= p0.mat(k, l).real() + tol::kFourierEntrySlack);
  }
}

// Real increment laws force the Hermitian frequency symmetry.
TEST_CASE("conjugate symmetry in the frequency argument") {
  const auto discrete = model::center(testutil::iid_gaussian_model(2.0));
  const auto lt = testutil::asymmetric_lt();
  for (const double zeta : {0.4, 1.1, 2.6}) {
    const auto plusD = fourier_matrix(discrete, 7.0, vec1(zeta));
    const auto minusD = fourier_matrix(discrete, 7.0, vec1(-zeta));
    CHECK(max_abs(ComplexMatrix(plusD.mat - minusD.mat.conjugate())) < 1e-13);

    const auto plusL = fourier_matrix(lt, 2.0, vec1(zeta));
    const auto minusL = fourier_matrix(lt, 2.0, vec1(-zeta));
    CHECK(max_abs(ComplexMatrix(plusL.mat - minusL.mat.conjugate())) < 1e-13);
  }
}

TEST_CASE("semigroup residuals on random triples") {
  const auto discrete = model::center(testutil::markov_gauss_model());
  const auto lt = testutil::asymmetric_lt();
  sim::PhiloxRng rng({9004, 0}, 0);
  for (int rep = 0; rep < 20; ++rep) {
    const double zeta = 5.0 * rng.nextUnit() - 2.5;
    const double tD = 1.0 + (rng.nextU32() % 12);
    const double sD = 1.0 + (rng.nextU32() % 12);
    REQUIRE(semigroup_residual(discrete, tD, sD, vec1(zeta)) <= tol::kSemigroupResidual);

    const double tL = 0.2 + 4.0 * rng.nextUnit();
    const double sL = 0.2 + 4.0 * rng.nextUnit();
    REQUIRE(semigroup_residual(lt, tL, sL, vec1(zeta)) <= tol::kSemigroupResidual);
  }
}

// One discrete step times one discrete step is literally the same float
// product as two steps, so the residual is identically zero.
TEST_CASE("discrete one-plus-one residual is exactly zero") {
  const auto discrete = model::center(testutil::markov_gauss_model());
  CHECK(semigroup_residual(discrete, 1.0, 1.0, vec1(0.6)) == 0.0);
}

TEST_CASE("discrete horizons must be integers") {
  const auto discrete = model::center(testutil::markov_gauss_model());
  CHECK_THROWS_AS(fourier_matrix(discrete, 2.5, vec1(0.3)), NonIntegerTime);
  CHECK_THROWS_AS(characteristic_function(discrete, 0, 0.5, vec1(0.3)), NonIntegerTime);
}

}  // TEST_SUITE
