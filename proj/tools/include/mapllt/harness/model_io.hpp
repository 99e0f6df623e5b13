#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <variant>

#include "mapllt/models.hpp"

namespace mapllt::harness {

// A model file declares one of the two supported families:
//
//   [meta]                     [meta]
//   name = iid_gaussian        name = two_state_symmetric_lt
//   dimension = 1
//                              [chain]
//   [chain]                    kind = generator
//   kind = stochastic          row = -1  1
//   row = 0.5 0.5              row =  1 -1
//   row = 0.5 0.5
//
//   [increments]
//   law = 1 1 gaussian mean -1 cov 1
//   law = 1 2 gaussian mean  1 cov 1
//   law = 2 1 gaussian mean -1 cov 1
//   law = 2 2 gaussian mean  1 cov 1
//
// `kind = generator` selects the local-time family (no [increments] section);
// `kind = stochastic` selects the discrete family, which requires a law for
// every positive transition.  States are 1-based in the file.  Law grammar:
//
//   point <a_1> ... <a_d>
//   gaussian mean <m_1> ... <m_d> cov <c_11> ... <c_dd>      (cov row-major)
//   uniform lo <l_1> ... <l_d> hi <h_1> ... <h_d>
//   mixture <w_1> ( <law> ) <w_2> ( <law> ) ...
//
// `#` starts a comment anywhere on a line.
struct ParsedModel {
  std::string name;
  std::variant<model::DiscreteMapModel, model::LocalTimeMapModel> value;

  bool isDiscrete() const { return std::holds_alternative<model::DiscreteMapModel>(value); }
  const model::DiscreteMapModel& discrete() const {
    return std::get<model::DiscreteMapModel>(value);
  }
  const model::LocalTimeMapModel& localTime() const {
    return std::get<model::LocalTimeMapModel>(value);
  }
  int states() const;
  // Dimension of the additive component seen by experiments (projected for
  // the local-time family).
  int dim() const;
};

ParsedModel parse_model(std::istream& in, const std::string& source);
ParsedModel load_model(const std::filesystem::path& path);

}  // namespace mapllt::harness
