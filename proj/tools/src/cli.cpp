#include "mapllt/harness/cli.hpp"

#include <chrono>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mapllt/errors.hpp"
#include "mapllt/harness/config.hpp"
#include "mapllt/harness/experiments.hpp"
#include "mapllt/harness/model_io.hpp"
#include "mapllt/harness/report.hpp"

namespace mapllt::harness {

namespace {

// Shared CLI state; flags may appear before or after the subcommand.
struct Options {
  std::string configFlag;
  std::optional<std::uint64_t> seed;
  std::string outDir;
  int threads = 0;  // 0 = hardware concurrency
  bool strict = false;
};

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

sim::ParallelOptions parallel_of(const Options& opt) {
  sim::ParallelOptions par;
  par.threads = opt.threads;
  return par;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string matrix_text(const Matrix& m) {
  std::string out = "[";
  for (int i = 0; i < m.rows(); ++i) {
    if (i > 0) out += "; ";
    for (int j = 0; j < m.cols(); ++j) {
      if (j > 0) out += ", ";
      out += fmt(m(i, j));
    }
  }
  return out + "]";
}

std::string vector_text(const Vector& v) {
  std::string out = "(";
  for (int i = 0; i < v.size(); ++i) {
    if (i > 0) out += ", ";
    out += fmt(v(i));
  }
  return out + ")";
}

// Config resolution: positional wins, --config is the fallback; asking for
// both with different values is ambiguous.
ExperimentConfig resolve_config(const std::string& positional, const Options& opt) {
  std::string path = positional;
  if (path.empty()) path = opt.configFlag;
  if (path.empty()) throw InvalidInput("no config given (pass a path or --config)");
  if (!positional.empty() && !opt.configFlag.empty() && positional != opt.configFlag)
    throw InvalidInput("conflicting config paths '" + positional + "' and '" + opt.configFlag +
                       "'");
  ExperimentConfig cfg = load_config(path);
  if (opt.seed.has_value()) cfg.seed = *opt.seed;
  if (!opt.outDir.empty()) cfg.outDir = opt.outDir;
  return cfg;
}

// Model-positional commands get a synthetic config so reports still carry a
// config hash and the scan/annulus defaults.
ExperimentConfig model_only_config(const std::string& modelPath, const Options& opt) {
  ExperimentConfig cfg;
  cfg.modelPath = modelPath;
  cfg.resolvedModelPath = modelPath;
  if (opt.seed.has_value()) cfg.seed = *opt.seed;
  if (!opt.outDir.empty()) cfg.outDir = opt.outDir;
  return cfg;
}

int run_analyze_command(const std::string& modelPath, const Options& opt) {
  const ExperimentConfig cfg = model_only_config(modelPath, opt);
  const ParsedModel pm = load_model(cfg.resolvedModelPath);
  const auto report = run_analyze(pm, cfg.seed, parallel_of(opt));

  std::printf("model: %s (%s, %d states, dim %d)\n", pm.name.c_str(),
              pm.isDiscrete() ? "discrete" : "local-time", pm.states(), pm.dim());
  std::printf("pi: %s\n", vector_text(report.pi).c_str());
  std::printf("drift: %s\n", vector_text(report.drift).c_str());
  std::printf("irreducible: %s\n", report.irreducible ? "yes" : "no");
  if (report.aperiodic.has_value())
    std::printf("aperiodic: %s\n", *report.aperiodic ? "yes" : "no");
  for (std::size_t i = 0; i < report.subgeneratorIrreducible.size(); ++i)
    std::printf("subgenerator without state %zu irreducible: %s\n", i + 1,
                report.subgeneratorIrreducible[i] ? "yes" : "no");
  std::printf("sigma exact:    %s\n", matrix_text(report.exactSigma).c_str());
  std::printf("sigma spectral: %s\n", matrix_text(report.spectralSigma).c_str());
  std::printf("sigma mc:       %s (se %s, t = %g, %zu paths)\n",
              matrix_text(report.mcSigma).c_str(), matrix_text(report.mcSe).c_str(),
              report.mcHorizon, report.mcSamples);
  std::printf("route rel error: %s   max mc z: %s\n", fmt(report.routeRelError).c_str(),
              fmt(report.maxCovZ).c_str());
  std::printf("three-way agreement: %s\n", report.agree ? "yes" : "NO");

  if (!cfg.outDir.empty() && cfg.outDir != ".")
    write_report(analyze_json(pm.name, report), cfg.outDir, pm.name + "_analyze");
  if (opt.strict && !report.agree) return 2;
  return 0;
}

int run_spectral_command(const std::string& modelPath, const Options& opt) {
  const ExperimentConfig cfg = model_only_config(modelPath, opt);
  const ParsedModel pm = load_model(cfg.resolvedModelPath);
  const auto report = run_spectral(pm, cfg);

  std::printf("model: %s\n", pm.name.c_str());
  std::printf("spectral gap at zero: %s (second modulus %s)\n", fmt(report.gapAtZero).c_str(),
              fmt(report.lambdaSecondModulus).c_str());
  std::printf("annulus decay: tau = %s, slope = %s, r^2 = %s\n", fmt(report.annulus.tauHat).c_str(),
              fmt(report.annulus.slope).c_str(), fmt(report.annulus.rSquared).c_str());

  if (!cfg.outDir.empty() && cfg.outDir != ".") {
    for (std::size_t j = 0; j < report.radiusByAxis.size(); ++j) {
      std::vector<CurveRow> rows;
      for (std::size_t i = 0; i < report.axis.size(); ++i)
        rows.push_back({report.axis[i], report.radiusByAxis[j][i], 0.0});
      write_curve_csv(rows, cfg.outDir, pm.name + "_radius_axis" + std::to_string(j + 1));
    }
    std::vector<CurveRow> decay;
    for (std::size_t i = 0; i < report.annulus.ts.size(); ++i)
      decay.push_back({report.annulus.ts[i], report.annulus.sValues[i], 0.0});
    write_curve_csv(decay, cfg.outDir, pm.name + "_annulus");
  }
  return 0;
}

int run_scan_command(const std::string& modelPath, const Options& opt) {
  const ExperimentConfig cfg = model_only_config(modelPath, opt);
  const ParsedModel pm = load_model(cfg.resolvedModelPath);
  const auto report = run_lattice_scan(pm, cfg);

  std::printf("model: %s\n", pm.name.c_str());
  std::printf("lattice suspected: %s\n", report.isLatticeSuspected ? "yes" : "no");
  std::printf("witnesses: %zu, max spectral radius on the annulus: %.12g\n", report.witnessCount,
              report.maxRadius);
  const std::size_t shown = std::min<std::size_t>(report.witnesses.size(), 8);
  for (std::size_t i = 0; i < shown; ++i)
    std::printf("  witness %zu: %s\n", i + 1, vector_text(report.witnesses[i]).c_str());
  if (report.witnesses.size() > shown)
    std::printf("  ... %zu more recorded\n", report.witnesses.size() - shown);

  if (!cfg.outDir.empty() && cfg.outDir != ".")
    write_report(lattice_json(pm.name, cfg, report), cfg.outDir, pm.name + "_lattice");
  return 0;
}

int run_verify_clt_command(const std::string& positional, const Options& opt) {
  const ExperimentConfig cfg = resolve_config(positional, opt);
  const ParsedModel pm = load_model(cfg.resolvedModelPath);
  Timer timer;
  const auto report = run_clt(pm, cfg, parallel_of(opt));

  std::printf("model: %s   config %s   seed %llu\n", pm.name.c_str(),
              config_hash_hex(cfg).c_str(), static_cast<unsigned long long>(cfg.seed));
  std::printf("sigma exact:    %s\n", matrix_text(report.exactSigma).c_str());
  std::printf("sigma spectral: %s (route rel error %s)\n",
              matrix_text(report.spectralSigma).c_str(), fmt(report.routeRelError).c_str());
  for (const auto& cell : report.cells)
    std::printf("t = %-8g cov z = %-8s mean z = %-8s %s\n", cell.t, fmt(cell.maxCovZ).c_str(),
                fmt(cell.maxMeanZ).c_str(), cell.pass ? "ok" : "OFF");
  std::printf("clt verification: %s\n", report.pass ? "PASS" : "FAIL");

  const std::string stem = pm.name + "_clt";
  write_report(clt_json(pm.name, cfg, report), cfg.outDir, stem);
  std::vector<CurveRow> rows;
  for (const auto& cell : report.cells)
    rows.push_back({cell.t, cell.empirical(0, 0), cell.se(0, 0)});
  write_curve_csv(rows, cfg.outDir, stem);
  write_meta(timer.seconds(), opt.threads, cfg.outDir, stem);
  if (opt.strict && !report.pass) return 2;
  return 0;
}

int run_cf_rate_command(const std::string& positional, const Options& opt) {
  const ExperimentConfig cfg = resolve_config(positional, opt);
  const ParsedModel pm = load_model(cfg.resolvedModelPath);
  Timer timer;
  const auto report = run_cf_rate(pm, cfg);

  std::printf("model: %s   config %s\n", pm.name.c_str(), config_hash_hex(cfg).c_str());
  for (std::size_t i = 0; i < report.ts.size(); ++i)
    std::printf("t = %-8g e(t) = %.6e\n", report.ts[i], report.errors[i]);
  std::printf("fitted slope %.4f  ci [%.4f, %.4f]  r^2 %.6f\n", report.fit.slope,
              report.fit.ciLow, report.fit.ciHigh, report.fit.rSquared);
  const bool inBand =
      report.fit.slope >= -0.65 && report.fit.slope <= -0.35 && report.fit.rSquared >= 0.95;
  std::printf("rate band [-0.65, -0.35] with r^2 >= 0.95: %s\n", inBand ? "PASS" : "FAIL");

  const std::string stem = pm.name + "_cf_rate";
  write_report(cf_rate_json(pm.name, cfg, report), cfg.outDir, stem);
  std::vector<CurveRow> rows;
  for (std::size_t i = 0; i < report.ts.size(); ++i)
    rows.push_back({report.ts[i], report.errors[i], 0.0});
  write_curve_csv(rows, cfg.outDir, stem);
  write_meta(timer.seconds(), opt.threads, cfg.outDir, stem);
  if (opt.strict && !inBand) return 2;
  return 0;
}

int run_verify_llt_command(const std::string& positional, const Options& opt) {
  const ExperimentConfig cfg = resolve_config(positional, opt);
  const ParsedModel pm = load_model(cfg.resolvedModelPath);
  Timer timer;
  const auto report = run_llt_density(pm, cfg, parallel_of(opt));

  std::printf("model: %s   config %s   seed %llu\n", pm.name.c_str(),
              config_hash_hex(cfg).c_str(), static_cast<unsigned long long>(cfg.seed));
  std::printf("sigma: %s   tail mass bound %.3e\n", matrix_text(report.sigma).c_str(),
              report.tailMassBound);
  for (const auto& cell : report.cells) {
    std::printf("t = %-6g sup|f - eta| = %.5f (x0.5: %.5f, x2: %.5f)  cf %.5f  mass %.4f",
                cell.t, cell.supErrorDensity, cell.supErrorHalfBw, cell.supErrorDoubleBw,
                cell.supErrorCF, cell.kdeMass);
    if (cell.boundaryTerm.has_value()) std::printf("  boundary %.3e", *cell.boundaryTerm);
    std::printf("\n");
  }
  std::printf("density rate slope %.4f  ci [%.4f, %.4f]  r^2 %.4f\n", report.densityFit.slope,
              report.densityFit.ciLow, report.densityFit.ciHigh, report.densityFit.rSquared);

  bool decreasing = true;
  bool massOk = true;
  for (std::size_t i = 0; i < report.cells.size(); ++i) {
    if (i > 0 && report.cells[i].supErrorDensity >= report.cells[i - 1].supErrorDensity)
      decreasing = false;
    if (report.cells[i].kdeMass < tol::kKdeMassLow || report.cells[i].kdeMass > tol::kKdeMassHigh)
      massOk = false;
  }
  std::printf("sup error strictly decreasing: %s   kde mass in window: %s\n",
              decreasing ? "yes" : "NO", massOk ? "yes" : "NO");

  const std::string stem = pm.name + "_llt";
  write_report(llt_json(pm.name, cfg, report), cfg.outDir, stem);
  std::vector<CurveRow> density, cf;
  for (const auto& cell : report.cells) {
    density.push_back({cell.t, cell.supErrorDensity, 0.0});
    cf.push_back({cell.t, cell.supErrorCF, 0.0});
  }
  write_curve_csv(density, cfg.outDir, stem + "_density");
  write_curve_csv(cf, cfg.outDir, stem + "_cf");
  write_meta(timer.seconds(), opt.threads, cfg.outDir, stem);
  if (opt.strict && !(decreasing && massOk)) return 2;
  return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"mapllt: Markov-additive-process limit-theorem workbench"};
  app.require_subcommand(1);
  app.fallthrough(true);
  app.set_version_flag("--version", "mapllt 0.1.0");

  Options opt;
  app.add_option("--config", opt.configFlag, "experiment config file");
  app.add_option("--seed", opt.seed, "override the config master seed");
  app.add_option("--out", opt.outDir, "override the report directory");
  app.add_option("--threads", opt.threads, "worker threads (0 = auto)")
      ->check(CLI::NonNegativeNumber);
  app.add_flag("--strict", opt.strict, "exit 2 on any acceptance failure");

  std::string analyzeModel, spectralModel, scanModel;
  std::string cltConfig, cfConfig, lltConfig;

  auto* analyze =
      app.add_subcommand("analyze", "stationary law, covariance by three routes, structure checks");
  analyze->add_option("model", analyzeModel, "model file")->required();
  auto* spectralCmd =
      app.add_subcommand("spectral", "dominant eigenvalue curves, gap, annulus decay");
  spectralCmd->add_option("model", spectralModel, "model file")->required();
  auto* scan = app.add_subcommand("scan-lattice", "spectral-radius lattice scan");
  scan->add_option("model", scanModel, "model file")->required();
  auto* clt = app.add_subcommand("verify-clt", "Monte Carlo covariance against both exact routes");
  clt->add_option("config", cltConfig, "experiment config");
  auto* cf = app.add_subcommand("cf-rate", "deterministic characteristic-function rate fit");
  cf->add_option("config", cfConfig, "experiment config");
  auto* llt = app.add_subcommand("verify-llt", "density estimation against the Gaussian limit");
  llt->add_option("config", lltConfig, "experiment config");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "error: %s\n\n%s", e.what(), app.help().c_str());
    return 1;
  }

  try {
    if (analyze->parsed()) return run_analyze_command(analyzeModel, opt);
    if (spectralCmd->parsed()) return run_spectral_command(spectralModel, opt);
    if (scan->parsed()) return run_scan_command(scanModel, opt);
    if (clt->parsed()) return run_verify_clt_command(cltConfig, opt);
    if (cf->parsed()) return run_cf_rate_command(cfConfig, opt);
    if (llt->parsed()) return run_verify_llt_command(lltConfig, opt);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 1;
  }
  return 1;  // unreachable: require_subcommand guarantees one branch
}

}  // namespace mapllt::harness
