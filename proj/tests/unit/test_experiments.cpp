#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "helpers.hpp"
#include "mapllt/errors.hpp"
#include "mapllt/harness/experiments.hpp"
#include "mapllt/harness/model_io.hpp"

using namespace mapllt;
using namespace mapllt::harness;

namespace {

ParsedModel shipped(const char* file) {
  return centered(load_model(testutil::models_dir() / file));
}

ExperimentConfig base_config() {
  ExperimentConfig cfg;
  cfg.seed = 20260815;
  cfg.stream = 0;
  return cfg;
}

}  // namespace

TEST_SUITE("experiments") {

TEST_CASE("exact transient mean matches the closed form") {
  // symmetric two-state local times started at state 1 (0-based):
  // E[projected Y_t] = 0.25 (1 - e^{-2t}) up to the start-state sign
  const auto pm = shipped("two_state_symmetric_lt.model");
  for (double t : {0.5, 2.0, 10.0}) {
    const double expected = 0.25 * (1.0 - std::exp(-2.0 * t));
    const Vector m0 = exact_transient_mean(pm, 0, t);
    const Vector m1 = exact_transient_mean(pm, 1, t);
    CHECK(m0(0) == doctest::Approx(expected).epsilon(1e-9));
    CHECK(m1(0) == doctest::Approx(-expected).epsilon(1e-9));
  }
}

TEST_CASE("exact transient covariance matches the closed forms") {
  // symmetric local times: Var(Y_t) = (t - (1 - e^{-2t})/2)/4 - (1 - e^{-2t})^2/16
  const auto lt = shipped("two_state_symmetric_lt.model");
  for (double t : {25.0, 50.0, 100.0}) {
    const double e = 1.0 - std::exp(-2.0 * t);
    const double var = 0.25 * (t - 0.5 * e) - e * e / 16.0;
    CHECK(exact_transient_covariance(lt, 0, t)(0, 0) ==
          doctest::Approx(var / t).epsilon(1e-6));
  }
  // iid sums have no transient: the covariance is exactly the asymptotic one
  const auto iid = shipped("iid_gaussian.model");
  for (double t : {16.0, 100.0}) {
    CHECK(exact_transient_covariance(iid, 0, t)(0, 0) == doctest::Approx(2.0).epsilon(1e-7));
  }
}

TEST_CASE("covariance routes agree and transients decay toward the limit") {
  const auto pm = shipped("two_state_markov_gauss.model");
  const Matrix sigma = exact_sigma(pm);
  CHECK(sigma(0, 0) == doctest::Approx(23.0 / 6.0).epsilon(1e-10));
  CHECK(max_abs(Matrix(sigma - spectral_sigma(pm))) / sigma(0, 0) < kRouteRelTol);
  const double gap100 = std::abs(exact_transient_covariance(pm, 0, 100.0)(0, 0) - sigma(0, 0));
  const double gap800 = std::abs(exact_transient_covariance(pm, 0, 800.0)(0, 0) - sigma(0, 0));
  CHECK(gap800 < gap100);
  // O(1/t) transient: an 8x horizon shrinks the gap by about 8x
  CHECK(gap100 / gap800 > 4.0);
  CHECK(gap100 / gap800 < 16.0);
}

TEST_CASE("clt experiment passes on a local-time model at desk scale") {
  auto cfg = base_config();
  cfg.tGrid = {25.0, 50.0};
  cfg.sampleCount = 20000;
  const auto pm = shipped("two_state_symmetric_lt.model");
  const auto report = run_clt(pm, cfg, sim::ParallelOptions{1, 16384});
  CHECK(report.pass);
  CHECK(report.routeRelError < kRouteRelTol);
  REQUIRE(report.cells.size() == 2);
  for (const auto& cell : report.cells) {
    CHECK(cell.pass);
    CHECK(cell.maxCovZ <= kMcZTol);
    CHECK(cell.maxMeanZ <= kMcZTol);
    CHECK(cell.sampleCount == 20000);
    CHECK(cell.exactCov(0, 0) < report.exactSigma(0, 0));  // transient sits below the limit here
  }
}

TEST_CASE("cf rate fits the expected decay on the local-time model") {
  auto cfg = base_config();
  cfg.tGrid = {16, 32, 64, 128, 256, 512};
  cfg.zetaRadius = 4.0;
  cfg.zetaStep = 0.05;
  const auto pm = shipped("two_state_symmetric_lt.model");
  const auto report = run_cf_rate(pm, cfg);
  REQUIRE(report.ts.size() == 6);
  REQUIRE(report.errors.size() == 6);
  for (std::size_t i = 1; i < report.errors.size(); ++i)
    CHECK(report.errors[i] < report.errors[i - 1]);
  CHECK(report.fit.slope > -0.65);
  CHECK(report.fit.slope < -0.35);
  CHECK(report.fit.rSquared > 0.95);
  CHECK(report.sigma(0, 0) == doctest::Approx(0.25).epsilon(1e-6));
}

TEST_CASE("cf sup error is pointwise sane") {
  const auto pm = shipped("iid_gaussian.model");
  const Matrix sigma = exact_sigma(pm);
  // symmetric increments: error is O(1/t), tiny already at t = 256
  const double e256 = cf_sup_error(pm, 0, 256.0, sigma, 4.0, 0.05);
  CHECK(e256 > 0.0);
  CHECK(e256 < 2e-4);
  CHECK(cf_sup_error(pm, 0, 1024.0, sigma, 4.0, 0.05) < e256);
}

TEST_CASE("lattice structure aborts the cf-rate experiment") {
  auto cfg = base_config();
  cfg.tGrid = {16, 32, 64};
  const auto pm = shipped("lattice_pointmass.model");
  CHECK_THROWS_AS(run_cf_rate(pm, cfg), LatticeDetected);
}

TEST_CASE("fractional horizons are rejected for discrete models") {
  auto cfg = base_config();
  cfg.tGrid = {16.0, 32.5};
  const auto pm = shipped("iid_gaussian.model");
  CHECK_THROWS_AS(run_cf_rate(pm, cfg), NonIntegerTime);
}

TEST_CASE("density experiment on a reduced grid") {
  auto cfg = base_config();
  cfg.tGrid = {16.0, 36.0, 64.0};
  cfg.sampleCount = 20000;
  const auto pm = shipped("two_state_symmetric_lt.model");
  const auto report = run_llt_density(pm, cfg, sim::ParallelOptions{1, 16384});
  CHECK(report.sigma(0, 0) == doctest::Approx(0.25).epsilon(1e-6));
  CHECK(report.tailMassBound < 1e-5);
  REQUIRE(report.cells.size() == 3);
  for (const auto& cell : report.cells) {
    CHECK(cell.sampleCount == 20000);
    CHECK(cell.supErrorDensity > 0.0);
    CHECK(cell.supErrorCF > 0.0);
    CHECK(cell.kdeMass > 0.9);
    CHECK(cell.kdeMass < 1.02);
    REQUIRE(cell.boundaryTerm.has_value());
    CHECK(*cell.boundaryTerm >= 0.0);
    CHECK(cell.bandwidth.size() == 1);
    // the bandwidth sweep brackets the reference estimate's regime
    CHECK(cell.supErrorHalfBw > 0.0);
    CHECK(cell.supErrorDoubleBw > 0.0);
  }
  CHECK(report.cells.back().supErrorDensity < report.cells.front().supErrorDensity);
}

TEST_CASE("density experiment leaves the boundary term empty for discrete models") {
  auto cfg = base_config();
  cfg.tGrid = {16.0, 36.0, 81.0};
  cfg.sampleCount = 15000;
  const auto pm = shipped("two_state_markov_gauss.model");
  const auto report = run_llt_density(pm, cfg, sim::ParallelOptions{1, 16384});
  for (const auto& cell : report.cells) CHECK_FALSE(cell.boundaryTerm.has_value());
}

TEST_CASE("boundary term closed form and monotonicity") {
  const auto lt = testutil::symmetric_lt();
  // support faces sit one Mahalanobis unit of sqrt(t)/(2 sigma) out:
  // sup density outside = peak * exp(-t / (8 * 0.25)) at sigma^2 = 1/4
  const double t = 100.0;
  const double expected = (1.0 / std::sqrt(2.0 * std::numbers::pi * 0.25)) *
                          std::exp(-0.5 * (0.25 * t * t / t) / 0.25);
  CHECK(boundary_term(lt, t) == doctest::Approx(expected).epsilon(1e-9));
  double prev = boundary_term(lt, 25.0);
  for (double h : {50.0, 100.0, 200.0, 400.0}) {
    const double cur = boundary_term(lt, h);
    CHECK(cur <= prev);
    prev = cur;
  }
}

TEST_CASE("lattice scan experiment matches the spectral scan") {
  auto cfg = base_config();
  cfg.scanRadius = 6.5;
  cfg.scanStep = 0.05;
  const auto report = run_lattice_scan(shipped("lattice_pointmass.model"), cfg);
  CHECK(report.isLatticeSuspected);
  CHECK(report.witnessCount >= 240);
  CHECK(report.maxRadius == doctest::Approx(1.0).epsilon(1e-12));

  const auto clean = run_lattice_scan(shipped("iid_gaussian.model"), cfg);
  CHECK_FALSE(clean.isLatticeSuspected);
  CHECK(clean.witnessCount == 0);
}

TEST_CASE("analyze agrees across all three covariance routes") {
  const auto pm = shipped("two_state_symmetric_lt.model");
  const auto report = run_analyze(pm, 20260815, sim::ParallelOptions{1, 16384});
  CHECK(report.agree);
  CHECK(report.exactSigma(0, 0) == doctest::Approx(0.25).epsilon(1e-10));
  CHECK(report.spectralSigma(0, 0) == doctest::Approx(0.25).epsilon(1e-5));
  CHECK(report.routeRelError < kRouteRelTol);
  CHECK(report.maxCovZ <= kMcZTol);
  CHECK(report.irreducible);
  CHECK_FALSE(report.aperiodic.has_value());
  REQUIRE(report.subgeneratorIrreducible.size() == 2);
  CHECK(report.subgeneratorIrreducible[0]);
  CHECK(report.pi(0) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(report.mcSamples >= 1000);
}

TEST_CASE("spectral summary reports the gap and annulus decay") {
  auto cfg = base_config();
  cfg.tGrid = {5, 10, 15, 20, 25, 30, 35, 40, 45, 50};
  const auto report = run_spectral(shipped("two_state_markov_gauss.model"), cfg);
  CHECK(report.gapAtZero == doctest::Approx(0.3).epsilon(1e-9));
  CHECK(report.lambdaSecondModulus == doctest::Approx(0.7).epsilon(1e-9));
  REQUIRE_FALSE(report.axis.empty());
  REQUIRE(report.radiusByAxis.size() == 1);
  CHECK(report.radiusByAxis[0].size() == report.axis.size());
  CHECK(report.annulus.tauHat < 1.0 - 1e-3);
  CHECK(report.annulus.rSquared > 0.95);
}

TEST_CASE("experiment validation floors") {
  auto cfg = base_config();
  const auto pm = shipped("two_state_symmetric_lt.model");
  cfg.tGrid = {};
  CHECK_THROWS_AS(run_clt(pm, cfg, sim::ParallelOptions{}), InvalidInput);
  cfg.tGrid = {25.0};
  cfg.sampleCount = 100;  // below the covariance floor
  CHECK_THROWS_AS(run_clt(pm, cfg, sim::ParallelOptions{}), InvalidInput);
  cfg.tGrid = {16.0};     // single horizon: no rate fit possible
  cfg.sampleCount = 20000;
  CHECK_THROWS_AS(run_cf_rate(pm, cfg), InvalidInput);
  CHECK_THROWS_AS(run_llt_density(pm, cfg, sim::ParallelOptions{}), InvalidInput);
}

}  // TEST_SUITE
