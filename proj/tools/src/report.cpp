#include "mapllt/harness/report.hpp"

#include <cstdio>
#include <fstream>

#include "mapllt/errors.hpp"

namespace mapllt::harness {

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_json(const Vector& v) {
  json out = json::array();
  for (int i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

namespace {

json fit_json(const RateFit& fit) {
  return json{{"slope", fit.slope},
              {"intercept", fit.intercept},
              {"r_squared", fit.rSquared},
              {"ci_low", fit.ciLow},
              {"ci_high", fit.ciHigh}};
}

json envelope(const std::string& model, const ExperimentConfig& cfg, const std::string& kind) {
  json doc;
  doc["model"] = model;
  doc["kind"] = kind;
  doc["config_hash"] = config_hash_hex(cfg);
  doc["seed"] = cfg.seed;
  return doc;
}

}  // namespace

json clt_json(const std::string& model, const ExperimentConfig& cfg, const CltReport& r) {
  json doc = envelope(model, cfg, "clt");
  doc["exact_sigma"] = matrix_json(r.exactSigma);
  doc["spectral_sigma"] = matrix_json(r.spectralSigma);
  doc["route_rel_error"] = r.routeRelError;
  doc["pass"] = r.pass;
  json results = json::array();
  for (const auto& cell : r.cells) {
    results.push_back(json{{"config_hash", config_hash_hex(cfg)},
                           {"t", cell.t},
                           {"sample_count", cell.sampleCount},
                           {"empirical", matrix_json(cell.empirical)},
                           {"se", matrix_json(cell.se)},
                           {"mean", vector_json(cell.mean)},
                           {"mean_se", vector_json(cell.meanSe)},
                           {"exact_mean", vector_json(cell.exactMean)},
                           {"exact_cov", matrix_json(cell.exactCov)},
                           {"max_cov_z", cell.maxCovZ},
                           {"max_mean_z", cell.maxMeanZ},
                           {"pass", cell.pass}});
  }
  doc["results"] = std::move(results);
  return doc;
}

json cf_rate_json(const std::string& model, const ExperimentConfig& cfg, const CfRateReport& r) {
  json doc = envelope(model, cfg, "cf_rate");
  doc["sigma"] = matrix_json(r.sigma);
  doc["fit"] = fit_json(r.fit);
  json results = json::array();
  for (std::size_t i = 0; i < r.ts.size(); ++i) {
    results.push_back(json{{"config_hash", config_hash_hex(cfg)},
                           {"t", r.ts[i]},
                           {"sup_error_cf", r.errors[i]}});
  }
  doc["results"] = std::move(results);
  return doc;
}

json llt_json(const std::string& model, const ExperimentConfig& cfg, const LltReport& r) {
  json doc = envelope(model, cfg, "llt_density");
  doc["sigma"] = matrix_json(r.sigma);
  doc["tail_mass_bound"] = r.tailMassBound;
  doc["density_fit"] = fit_json(r.densityFit);
  doc["cf_fit"] = fit_json(r.cfFit);
  json results = json::array();
  for (const auto& cell : r.cells) {
    json rec{{"config_hash", config_hash_hex(cfg)},
             {"t", cell.t},
             {"sample_count", cell.sampleCount},
             {"sup_error_density", cell.supErrorDensity},
             {"sup_error_half_bw", cell.supErrorHalfBw},
             {"sup_error_double_bw", cell.supErrorDoubleBw},
             {"sup_error_cf", cell.supErrorCF}};
    if (cell.boundaryTerm.has_value())
      rec["boundary_term"] = *cell.boundaryTerm;
    else
      rec["boundary_term"] = nullptr;
    rec["kde_mass"] = cell.kdeMass;
    rec["bandwidth"] = vector_json(cell.bandwidth);
    results.push_back(std::move(rec));
  }
  doc["results"] = std::move(results);
  return doc;
}

json lattice_json(const std::string& model, const ExperimentConfig& cfg, const LatticeReport& r) {
  json doc = envelope(model, cfg, "lattice_scan");
  json witnesses = json::array();
  for (const auto& w : r.witnesses) witnesses.push_back(vector_json(w));
  doc["results"] = json::array({json{{"config_hash", config_hash_hex(cfg)},
                                     {"suspected", r.isLatticeSuspected},
                                     {"witness_count", r.witnessCount},
                                     {"max_radius", r.maxRadius},
                                     {"witnesses", std::move(witnesses)}}});
  return doc;
}

json analyze_json(const std::string& model, const AnalyzeReport& r) {
  json doc;
  doc["model"] = model;
  doc["kind"] = "analyze";
  doc["pi"] = vector_json(r.pi);
  doc["drift"] = vector_json(r.drift);
  doc["exact_sigma"] = matrix_json(r.exactSigma);
  doc["spectral_sigma"] = matrix_json(r.spectralSigma);
  doc["mc_sigma"] = matrix_json(r.mcSigma);
  doc["mc_se"] = matrix_json(r.mcSe);
  doc["mc_horizon"] = r.mcHorizon;
  doc["mc_samples"] = r.mcSamples;
  doc["route_rel_error"] = r.routeRelError;
  doc["max_cov_z"] = r.maxCovZ;
  doc["irreducible"] = r.irreducible;
  if (r.aperiodic.has_value()) doc["aperiodic"] = *r.aperiodic;
  if (!r.subgeneratorIrreducible.empty()) {
    json flags = json::array();
    for (const bool f : r.subgeneratorIrreducible) flags.push_back(f);
    doc["subgenerator_irreducible"] = std::move(flags);
  }
  doc["agree"] = r.agree;
  return doc;
}

std::filesystem::path write_report(const json& doc, const std::filesystem::path& outDir,
                                   const std::string& stem) {
  std::filesystem::create_directories(outDir);
  const auto path = outDir / (stem + ".json");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write report '" + path.string() + "'");
  out << doc.dump(2) << "\n";
  return path;
}

std::filesystem::path write_curve_csv(const std::vector<CurveRow>& rows,
                                      const std::filesystem::path& outDir,
                                      const std::string& stem) {
  std::filesystem::create_directories(outDir);
  const auto path = outDir / (stem + ".csv");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write curve '" + path.string() + "'");
  out << "t,value,stderr\n";
  char buf[128];
  for (const auto& row : rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", row.t, row.value, row.stderrValue);
    out << buf;
  }
  return path;
}

std::filesystem::path write_meta(double wallSeconds, int threads,
                                 const std::filesystem::path& outDir, const std::string& stem) {
  std::filesystem::create_directories(outDir);
  const auto path = outDir / (stem + "_meta.json");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write meta '" + path.string() + "'");
  json doc{{"wall_clock_seconds", wallSeconds}, {"threads", threads}};
  out << doc.dump(2) << "\n";
  return path;
}

}  // namespace mapllt::harness
