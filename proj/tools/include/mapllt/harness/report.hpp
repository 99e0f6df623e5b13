#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "mapllt/harness/config.hpp"
#include "mapllt/harness/experiments.hpp"

namespace mapllt::harness {

using json = nlohmann::ordered_json;

// Report envelope: {model, config_hash, seed, results: [...]} plus
// experiment-specific summary fields.  Every result record repeats the config
// hash that produced it.  Reports contain no clocks or host data, so reruns
// with the same config and seed are byte-identical; wall-clock time goes to
// the separate *_meta.json sidecar.
json clt_json(const std::string& model, const ExperimentConfig& cfg, const CltReport& r);
json cf_rate_json(const std::string& model, const ExperimentConfig& cfg, const CfRateReport& r);
json llt_json(const std::string& model, const ExperimentConfig& cfg, const LltReport& r);
json lattice_json(const std::string& model, const ExperimentConfig& cfg, const LatticeReport& r);
json analyze_json(const std::string& model, const AnalyzeReport& r);

json matrix_json(const Matrix& m);
json vector_json(const Vector& v);

struct CurveRow {
  double t = 0.0;
  double value = 0.0;
  double stderrValue = 0.0;
};

// <outDir>/<stem>.json, dump(2)-formatted with a trailing newline.
std::filesystem::path write_report(const json& doc, const std::filesystem::path& outDir,
                                   const std::string& stem);
// <outDir>/<stem>.csv with header "t,value,stderr".
std::filesystem::path write_curve_csv(const std::vector<CurveRow>& rows,
                                      const std::filesystem::path& outDir,
                                      const std::string& stem);
// <outDir>/<stem>_meta.json carrying wall-clock seconds and thread count.
std::filesystem::path write_meta(double wallSeconds, int threads,
                                 const std::filesystem::path& outDir, const std::string& stem);

}  // namespace mapllt::harness
