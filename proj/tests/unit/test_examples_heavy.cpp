#include <doctest.h>

#include "helpers.hpp"
#include "mapllt/harness/config.hpp"
#include "mapllt/harness/experiments.hpp"
#include "mapllt/harness/model_io.hpp"

using namespace mapllt;
using namespace mapllt::harness;

// Full-size runs of every shipped experiment config with its committed seed.
// These pin the headline numbers the bundled configs are documented to give.

namespace {

LltReport run_llt(const char* configName) {
  const auto cfg = load_config(testutil::configs_dir() / configName);
  const auto pm = centered(load_model(cfg.resolvedModelPath));
  return run_llt_density(pm, cfg, sim::ParallelOptions{1, 16384});
}

}  // namespace

TEST_SUITE("examples_heavy") {

TEST_CASE("shipped clt config verifies three ways") {
  const auto cfg = load_config(testutil::configs_dir() / "clt_two_state_symmetric.config");
  const auto pm = centered(load_model(cfg.resolvedModelPath));
  const auto report = run_clt(pm, cfg, sim::ParallelOptions{1, 16384});
  CHECK(report.pass);
  CHECK(report.routeRelError < kRouteRelTol);
  CHECK(report.exactSigma(0, 0) == doctest::Approx(0.25).epsilon(1e-10));
  for (const auto& cell : report.cells) CHECK(cell.pass);
}

TEST_CASE("shipped local-time density config converges") {
  const auto report = run_llt("llt_two_state_symmetric.config");
  REQUIRE(report.cells.size() == 3);
  for (std::size_t i = 1; i < report.cells.size(); ++i)
    CHECK(report.cells[i].supErrorDensity < report.cells[i - 1].supErrorDensity);
  CHECK(report.cells.back().supErrorDensity < 0.05);
  for (const auto& cell : report.cells) {
    CHECK(cell.kdeMass >= 0.95);
    CHECK(cell.kdeMass <= 1.01);
    REQUIRE(cell.boundaryTerm.has_value());
  }
  // boundary contribution shrinks with the horizon
  CHECK(*report.cells[2].boundaryTerm <= *report.cells[1].boundaryTerm);
  CHECK(*report.cells[1].boundaryTerm <= *report.cells[0].boundaryTerm);
}

TEST_CASE("shipped discrete density config converges") {
  const auto report = run_llt("llt_two_state_markov_gauss.config");
  REQUIRE(report.cells.size() == 3);
  for (std::size_t i = 1; i < report.cells.size(); ++i)
    CHECK(report.cells[i].supErrorDensity < report.cells[i - 1].supErrorDensity);
  CHECK(report.cells.back().supErrorDensity < 0.03);
  for (const auto& cell : report.cells) {
    CHECK(cell.kdeMass >= 0.95);
    CHECK(cell.kdeMass <= 1.01);
    CHECK_FALSE(cell.boundaryTerm.has_value());
  }
  // genuine square-root decay, visible well above the estimator noise floor
  CHECK(report.densityFit.slope < -0.35);
  CHECK(report.densityFit.slope > -0.8);
}

}  // TEST_SUITE
