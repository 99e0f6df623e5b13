#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace mapllt::harness {

// Flat `key = value` experiment description.  Recognized keys:
//
//   model           path to the .model file (required; relative paths are
//                   resolved against the config file's directory first,
//                   then the working directory)
//   start_state     1-based start state                      (default 1)
//   t_grid          whitespace-separated horizons, strictly increasing
//   sample_count    Monte Carlo paths per horizon            (default 100000)
//   zeta_radius     frequency ball radius for CF experiments (default 4.0)
//   zeta_step       frequency grid step                      (default 0.05)
//   bandwidth_scale multiplier on the Silverman bandwidth    (default 1.0)
//   seed            master seed                              (default 0)
//   stream          RNG stream index                         (default 0)
//   scan_radius     lattice-scan ball radius                 (default 7.0)
//   scan_step       lattice-scan grid step                   (default 0.05)
//   annulus_delta   inner annulus radius                     (default 0.5)
//   annulus_outer   outer annulus radius                     (default 3.0)
//   out_dir         report directory                         (default ".")
//
// `#` starts a comment.  Unknown keys are rejected.
struct ExperimentConfig {
  std::string modelPath;
  std::filesystem::path resolvedModelPath;
  int startState = 1;
  std::vector<double> tGrid;
  std::size_t sampleCount = 100000;
  double zetaRadius = 4.0;
  double zetaStep = 0.05;
  double bandwidthScale = 1.0;
  std::uint64_t seed = 0;
  std::uint32_t stream = 0;
  double scanRadius = 7.0;
  double scanStep = 0.05;
  double annulusDelta = 0.5;
  double annulusOuter = 3.0;
  std::string outDir = ".";
};

ExperimentConfig parse_config(std::istream& in, const std::string& source,
                              const std::filesystem::path& baseDir);
ExperimentConfig load_config(const std::filesystem::path& path);

// Canonical `key = value` rendering of every experiment-defining key in fixed
// order (out_dir is excluded: where a report lands is not part of its
// identity); two configs hash equal iff they describe the same experiment.
std::string canonical_serialization(const ExperimentConfig& cfg);
std::uint64_t config_hash(const ExperimentConfig& cfg);  // FNV-1a over the canonical form
std::string config_hash_hex(const ExperimentConfig& cfg);

}  // namespace mapllt::harness
