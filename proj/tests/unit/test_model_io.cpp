#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>

#include "helpers.hpp"
#include "mapllt/errors.hpp"
#include "mapllt/harness/model_io.hpp"

using namespace mapllt;
using namespace mapllt::harness;

namespace {

ParsedModel parse(const std::string& text) {
  std::istringstream in(text);
  return parse_model(in, "test");
}

// Asserts the parse fails with InvalidInput whose message contains `needle`.
void expect_parse_error(const std::string& text, const std::string& needle) {
  try {
    parse(text);
    FAIL_CHECK("expected parse failure containing '" << needle << "'");
  } catch (const InvalidInput& e) {
    const std::string what = e.what();
    INFO("message: " << what);
    CHECK(what.find(needle) != std::string::npos);
  }
}

const std::string kDiscreteDoc = R"(
[meta]
name = tiny
dimension = 1

[chain]
kind = stochastic
row = 0.5 0.5
row = 0.5 0.5

[increments]
law = 1 1 point 0
law = 1 2 point 1
law = 2 1 point -1
law = 2 2 point 0
)";

}  // namespace

TEST_SUITE("model_io") {

TEST_CASE("every bundled model file parses") {
  const auto files = testutil::bundled_model_files();
  REQUIRE(files.size() >= 8);
  for (const auto& f : files) {
    const auto pm = load_model(f);
    CHECK_FALSE(pm.name.empty());
    CHECK(pm.states() >= 2);
    CHECK(pm.dim() >= 1);
    // file stem is the model name for everything we ship
    CHECK(pm.name == f.stem().string());
  }
}

TEST_CASE("parsed families and shapes match the shipped definitions") {
  const auto lt = load_model(testutil::models_dir() / "two_state_symmetric_lt.model");
  CHECK_FALSE(lt.isDiscrete());
  CHECK(lt.states() == 2);
  CHECK(lt.dim() == 1);  // projected
  CHECK(lt.localTime().generator().mat()(0, 1) == doctest::Approx(1.0));

  const auto iid = load_model(testutil::models_dir() / "iid_gaussian.model");
  CHECK(iid.isDiscrete());
  CHECK(iid.discrete().chain().mat()(0, 1) == doctest::Approx(0.5));
  CHECK(iid.discrete().dim() == 1);

  const auto mixed = load_model(testutil::models_dir() / "mixed_uniform.model");
  const auto& mix = mixed.discrete().law(0, 1);  // point/gaussian mixture
  CHECK(mix.mean()(0) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(mix.covariance()(0, 0) == doctest::Approx(0.375));
  const auto& box = mixed.discrete().law(0, 0);
  CHECK(box.mean()(0) == doctest::Approx(0.0));
  CHECK(box.covariance()(0, 0) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("comments and blank lines are ignored") {
  const auto pm = parse("# leading comment\n" + kDiscreteDoc + "\n# trailing\n");
  CHECK(pm.name == "tiny");
  CHECK(pm.isDiscrete());
  CHECK(pm.states() == 2);
}

TEST_CASE("missing metadata is rejected") {
  expect_parse_error(R"(
[meta]
dimension = 1
[chain]
kind = stochastic
row = 1.0
)",
                     "name is required");
  expect_parse_error(R"(
[meta]
name = x
dimension = 1
[chain]
row = 1.0
)",
                     "kind is required");
}

TEST_CASE("chain shape errors carry source and line") {
  expect_parse_error(R"(
[meta]
name = x
dimension = 1
[chain]
kind = stochastic
row = 0.5 0.5
row = 1.0
)",
                     "test:8");
}

TEST_CASE("generator models must not declare increments") {
  expect_parse_error(R"(
[meta]
name = x
dimension = 1
[chain]
kind = generator
row = -1 1
row = 1 -1
[increments]
law = 1 1 point 0
)",
                     "[increments] not allowed");
}

TEST_CASE("local-time dimension must match the projection") {
  expect_parse_error(R"(
[meta]
name = x
dimension = 2
[chain]
kind = generator
row = -1 1
row = 1 -1
)",
                     "does not match projected dimension");
}

TEST_CASE("law table errors") {
  // missing law on a positive transition
  expect_parse_error(R"(
[meta]
name = x
dimension = 1
[chain]
kind = stochastic
row = 0.5 0.5
row = 0.5 0.5
[increments]
law = 1 1 point 0
law = 2 1 point 0
law = 2 2 point 0
)",
                     "law");
  // out-of-range (states are 1-based in the file)
  expect_parse_error(kDiscreteDoc + "law = 0 1 point 0\n", "law states");
  expect_parse_error(kDiscreteDoc + "law = 1 3 point 0\n", "law states");
  // duplicate
  expect_parse_error(kDiscreteDoc + "law = 1 1 point 5\n", "duplicate law");
  // trailing tokens
  expect_parse_error(R"(
[meta]
name = x
dimension = 1
[chain]
kind = stochastic
row = 1.0
[increments]
law = 1 1 point 0 extra
)",
                     "trailing tokens");
}

TEST_CASE("law grammar errors") {
  const std::string head = R"(
[meta]
name = x
dimension = 1
[chain]
kind = stochastic
row = 1.0
[increments]
)";
  expect_parse_error(head + "law = 1 1 cauchy 0\n", "unknown law kind");
  expect_parse_error(head + "law = 1 1 mixture\n", "mixture law has no components");
  expect_parse_error(head + "law = 1 1 mixture 0.5 ( point 0\n", "law ended unexpectedly");
  expect_parse_error(head + "law = 1 1 gaussian mean 0 cov abc\n", "expected a number");
  expect_parse_error(head + "law = 1 1 uniform lo 2 hi 1\n", "");  // lo > hi rejected downstream
}

TEST_CASE("document structure errors") {
  expect_parse_error("stray = 1\n", "content before any section header");
  expect_parse_error("[meta\nname = x\n", "malformed section header");
  expect_parse_error("[wat]\nx = 1\n", "unknown section");
  expect_parse_error("[meta]\nname = x\ncolor = red\n", "unknown [meta] key");
  expect_parse_error("[meta]\nname = x\n[chain]\nkind = markov\n", "chain kind");
}

TEST_CASE("missing files are reported by path") {
  try {
    load_model(testutil::models_dir() / "no_such.model");
    FAIL_CHECK("expected open failure");
  } catch (const InvalidInput& e) {
    CHECK(std::string(e.what()).find("no_such.model") != std::string::npos);
  }
}

}  // TEST_SUITE
