#include "mapllt/harness/config.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <istream>
#include <sstream>

#include "mapllt/errors.hpp"

namespace mapllt::harness {

namespace {

[[noreturn]] void fail(const std::string& source, int line, const std::string& what) {
  throw InvalidInput(source + ":" + std::to_string(line) + ": " + what);
}

std::string strip(const std::string& raw) {
  std::string s = raw.substr(0, raw.find('#'));
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

double number_of(const std::string& tok, const std::string& source, int line) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &used);
  } catch (const std::exception&) {
    fail(source, line, "expected a number, got '" + tok + "'");
  }
  if (used != tok.size()) fail(source, line, "expected a number, got '" + tok + "'");
  return v;
}

std::uint64_t unsigned_of(const std::string& tok, const std::string& source, int line) {
  // stoull accepts a leading '-' and wraps; forbid anything but digits
  if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
    fail(source, line, "expected an unsigned integer, got '" + tok + "'");
  std::size_t used = 0;
  std::uint64_t v = 0;
  try {
    v = std::stoull(tok, &used);
  } catch (const std::exception&) {
    fail(source, line, "expected an unsigned integer, got '" + tok + "'");
  }
  if (used != tok.size()) fail(source, line, "expected an unsigned integer, got '" + tok + "'");
  return v;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

ExperimentConfig parse_config(std::istream& in, const std::string& source,
                              const std::filesystem::path& baseDir) {
  ExperimentConfig cfg;
  std::string raw;
  int lineNo = 0;
  while (std::getline(in, raw)) {
    ++lineNo;
    const std::string line = strip(raw);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(source, lineNo, "expected 'key = value'");
    const std::string key = strip(line.substr(0, eq));
    const std::string value = strip(line.substr(eq + 1));
    if (value.empty()) fail(source, lineNo, "key '" + key + "' has no value");
    if (key == "model") {
      cfg.modelPath = value;
    } else if (key == "start_state") {
      const auto v = unsigned_of(value, source, lineNo);
      if (v < 1) fail(source, lineNo, "start_state is 1-based");
      cfg.startState = static_cast<int>(v);
    } else if (key == "t_grid") {
      std::istringstream ts(value);
      std::string tok;
      cfg.tGrid.clear();
      while (ts >> tok) cfg.tGrid.push_back(number_of(tok, source, lineNo));
      for (std::size_t i = 0; i < cfg.tGrid.size(); ++i) {
        if (cfg.tGrid[i] <= 0.0) fail(source, lineNo, "t_grid entries must be positive");
        if (i > 0 && cfg.tGrid[i] <= cfg.tGrid[i - 1])
          fail(source, lineNo, "t_grid must be strictly increasing");
      }
    } else if (key == "sample_count") {
      cfg.sampleCount = unsigned_of(value, source, lineNo);
    } else if (key == "zeta_radius") {
      cfg.zetaRadius = number_of(value, source, lineNo);
    } else if (key == "zeta_step") {
      cfg.zetaStep = number_of(value, source, lineNo);
    } else if (key == "bandwidth_scale") {
      cfg.bandwidthScale = number_of(value, source, lineNo);
      if (cfg.bandwidthScale <= 0.0) fail(source, lineNo, "bandwidth_scale must be positive");
    } else if (key == "seed") {
      cfg.seed = unsigned_of(value, source, lineNo);
    } else if (key == "stream") {
      cfg.stream = static_cast<std::uint32_t>(unsigned_of(value, source, lineNo));
    } else if (key == "scan_radius") {
      cfg.scanRadius = number_of(value, source, lineNo);
    } else if (key == "scan_step") {
      cfg.scanStep = number_of(value, source, lineNo);
    } else if (key == "annulus_delta") {
      cfg.annulusDelta = number_of(value, source, lineNo);
    } else if (key == "annulus_outer") {
      cfg.annulusOuter = number_of(value, source, lineNo);
    } else if (key == "out_dir") {
      cfg.outDir = value;
    } else {
      fail(source, lineNo, "unknown key '" + key + "'");
    }
  }
  if (cfg.modelPath.empty()) fail(source, lineNo, "missing required key 'model'");

  const std::filesystem::path declared(cfg.modelPath);
  if (declared.is_absolute()) {
    cfg.resolvedModelPath = declared;
  } else if (!baseDir.empty() && std::filesystem::exists(baseDir / declared)) {
    cfg.resolvedModelPath = baseDir / declared;
  } else {
    cfg.resolvedModelPath = declared;
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open config file '" + path.string() + "'");
  return parse_config(in, path.string(), path.parent_path());
}

std::string canonical_serialization(const ExperimentConfig& cfg) {
  std::ostringstream out;
  out << "model = " << cfg.modelPath << "\n";
  out << "start_state = " << cfg.startState << "\n";
  out << "t_grid =";
  for (const double t : cfg.tGrid) out << " " << fmt(t);
  out << "\n";
  out << "sample_count = " << cfg.sampleCount << "\n";
  out << "zeta_radius = " << fmt(cfg.zetaRadius) << "\n";
  out << "zeta_step = " << fmt(cfg.zetaStep) << "\n";
  out << "bandwidth_scale = " << fmt(cfg.bandwidthScale) << "\n";
  out << "seed = " << cfg.seed << "\n";
  out << "stream = " << cfg.stream << "\n";
  out << "scan_radius = " << fmt(cfg.scanRadius) << "\n";
  out << "scan_step = " << fmt(cfg.scanStep) << "\n";
  out << "annulus_delta = " << fmt(cfg.annulusDelta) << "\n";
  out << "annulus_outer = " << fmt(cfg.annulusOuter) << "\n";
  return out.str();
}

std::uint64_t config_hash(const ExperimentConfig& cfg) {
  const std::string text = canonical_serialization(cfg);
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string config_hash_hex(const ExperimentConfig& cfg) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, config_hash(cfg));
  return buf;
}

}  // namespace mapllt::harness
