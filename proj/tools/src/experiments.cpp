#include "mapllt/harness/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>

#include "mapllt/density.hpp"
#include "mapllt/deviation.hpp"
#include "mapllt/errors.hpp"
#include "mapllt/expm.hpp"
#include "mapllt/fourier.hpp"
#include "mapllt/moments.hpp"

namespace mapllt::harness {

namespace {

constexpr double kZeroDiff = 1e-12;       // |difference| below this needs no SE
constexpr double kIntegerSlack = 1e-9;    // discrete horizons must be integers
constexpr std::size_t kGridBudget = 2000000;

long integer_horizon(double t) {
  const double r = std::round(t);
  if (t < 1.0 || std::abs(t - r) > kIntegerSlack)
    throw NonIntegerTime("discrete model horizon t = " + std::to_string(t) +
                         " is not a positive integer");
  return static_cast<long>(r);
}

int require_state(const ParsedModel& pm, int oneBased) {
  if (oneBased < 1 || oneBased > pm.states())
    throw InvalidInput("start state " + std::to_string(oneBased) + " outside 1.." +
                       std::to_string(pm.states()));
  return oneBased - 1;
}

Matrix matrix_power(const Matrix& base, long n) {
  Matrix acc = Matrix::Identity(base.rows(), base.cols());
  Matrix sq = base;
  long k = n;
  while (k > 0) {
    if (k & 1) acc = acc * sq;
    k >>= 1;
    if (k > 0) sq = sq * sq;
  }
  return acc;
}

// Mean increment of each row under the centered laws: row k = sum_l P_kl E[law_kl].
Matrix law_mean_table(const model::DiscreteMapModel& m) {
  const int n = m.states();
  Matrix v = Matrix::Zero(n, m.dim());
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l)
      if (m.hasLaw(k, l)) v.row(k) += m.chain().mat()(k, l) * m.law(k, l).mean().transpose();
  return v;
}

// Frequency grid covering the ball ||zeta|| <= radius with the given step,
// origin included.  Step is uniform per coordinate.
std::vector<Vector> ball_grid(int d, double radius, double step) {
  if (!(radius > 0.0) || !(step > 0.0))
    throw InvalidInput("frequency grid needs positive radius and step");
  const long half = static_cast<long>(std::floor(radius / step));
  const long side = 2 * half + 1;
  double count = 1.0;
  for (int j = 0; j < d; ++j) count *= static_cast<double>(side);
  if (count > static_cast<double>(kGridBudget))
    throw InvalidInput("frequency grid of " + std::to_string(static_cast<long long>(count)) +
                       " points exceeds the budget");

  std::vector<Vector> out;
  std::vector<long> idx(static_cast<std::size_t>(d), -half);
  const double r2 = radius * radius;
  while (true) {
    Vector z(d);
    for (int j = 0; j < d; ++j) z(j) = step * static_cast<double>(idx[static_cast<std::size_t>(j)]);
    if (z.squaredNorm() <= r2) out.push_back(std::move(z));
    int j = 0;
    for (; j < d; ++j) {
      auto& v = idx[static_cast<std::size_t>(j)];
      if (++v <= half) break;
      v = -half;
    }
    if (j == d) break;
  }
  return out;
}

Complex phi(const ParsedModel& pm, int state, double t, const Vector& zeta) {
  return pm.isDiscrete() ? fourier::characteristic_function(pm.discrete(), state, t, zeta)
                         : fourier::characteristic_function(pm.localTime(), state, t, zeta);
}

double rel_error(const Matrix& a, const Matrix& b) {
  const double scale = std::max({1e-12, max_abs(a), max_abs(b)});
  return max_abs(Matrix(a - b)) / scale;
}

// z-score with a guard: a vanishing difference needs no standard error (both
// sides exactly zero happens for degenerate models).
double z_score(double diff, double se) {
  const double ad = std::abs(diff);
  if (ad <= kZeroDiff) return 0.0;
  if (se <= 0.0) return std::numeric_limits<double>::infinity();
  return ad / se;
}

sim::SampleBatch simulate(const ParsedModel& pm, int state, double t, std::size_t paths,
                          sim::SeedSpec seed, const sim::ParallelOptions& par) {
  if (pm.isDiscrete())
    return sim::simulate_discrete(pm.discrete(), state, integer_horizon(t), paths, seed, par);
  return sim::simulate_ctmc_local_times(pm.localTime(), state, t, paths, seed, par);
}

// Deterministic lattice gate for the CF experiments: geometric annulus decay
// certifies non-lattice structure; a flat response throws LatticeDetected.
void require_non_lattice(const ParsedModel& pm, int state, const ExperimentConfig& cfg) {
  const std::vector<double> ts{5, 10, 15, 20, 25, 30, 35, 40, 45, 50};
  if (pm.isDiscrete())
    spectral::annulus_decay(pm.discrete(), state, cfg.annulusDelta, cfg.annulusOuter, ts);
  else
    spectral::annulus_decay(pm.localTime(), state, cfg.annulusDelta, cfg.annulusOuter, ts);
}

double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

}  // namespace

// ---------------------------------------------------------------------------
// shared routes

ParsedModel centered(const ParsedModel& pm) {
  if (!pm.isDiscrete()) return pm;
  return ParsedModel{pm.name, model::center(pm.discrete())};
}

markov::CovarianceMatrix exact_covariance(const ParsedModel& pm) {
  if (pm.isDiscrete()) return model::asymptotic_covariance_exact(centered(pm).discrete());
  return markov::local_time_covariance(pm.localTime().generator());
}

Matrix exact_sigma(const ParsedModel& pm) { return exact_covariance(pm).mat(); }

Matrix spectral_sigma(const ParsedModel& pm) {
  const ParsedModel c = centered(pm);
  if (c.isDiscrete()) return spectral::spectral_covariance(c.discrete()).mat();
  return spectral::spectral_covariance(c.localTime()).mat();
}

Vector exact_transient_mean(const ParsedModel& pm, int state, double t) {
  if (pm.isDiscrete()) {
    const auto& m = pm.discrete();
    const long n = integer_horizon(t);
    const Matrix& p = m.chain().mat();
    const Matrix z = markov::fundamental_matrix(m.chain());
    const Matrix table = law_mean_table(m);
    // E_k[Y_n] = row_k((I - P^n) Z Vbar), from summing P^j Vbar and telescoping
    // the deviations against the fundamental matrix.
    const Matrix full =
        (Matrix::Identity(p.rows(), p.cols()) - matrix_power(p, n)) * (z * table);
    return full.row(state).transpose();
  }
  const auto& m = pm.localTime();
  const Matrix pt = markov::matrix_exp(m.generator(), t).mat();
  const Matrix dev = markov::deviation_matrix(m.generator()).mat();
  // E_k[Y_t] = row_k((I - e^{tG}) D), the integrated deviation from stationarity.
  const Matrix full = (Matrix::Identity(pt.rows(), pt.cols()) - pt) * dev;
  return model::project_local_times(full.row(state).transpose());
}

Matrix exact_transient_covariance(const ParsedModel& pm, int state, double t) {
  const int d = pm.dim();
  const double root = std::sqrt(t);
  // g(eta) = log|phi_{k,t}(eta / sqrt(t))| expands as -eta' C eta / 2 with
  // C = Cov_k(t^{-1/2} Y_t); phi itself is exact linear algebra, so central
  // differences plus one Richardson stage leave only ~1e-10 absolute error.
  const auto g = [&](const Vector& eta) {
    return std::log(std::abs(phi(pm, state, t, Vector(eta / root))));
  };
  const auto hessian = [&](double h) {
    Matrix out(d, d);
    for (int i = 0; i < d; ++i) {
      Vector ei = Vector::Zero(d);
      ei(i) = h;
      out(i, i) = (g(ei) - 2.0 * g(Vector::Zero(d)) + g(Vector(-ei))) / (h * h);
      for (int j = i + 1; j < d; ++j) {
        Vector ej = Vector::Zero(d);
        ej(j) = h;
        const double cross = (g(Vector(ei + ej)) - g(Vector(ei - ej)) - g(Vector(ej - ei)) +
                              g(Vector(-ei - ej))) /
                             (4.0 * h * h);
        out(i, j) = cross;
        out(j, i) = cross;
      }
    }
    return out;
  };
  const Matrix coarse = hessian(2e-2);
  const Matrix fine = hessian(1e-2);
  return -(4.0 * fine - coarse) / 3.0;
}

// ---------------------------------------------------------------------------
// CLT verification

CltReport run_clt(const ParsedModel& raw, const ExperimentConfig& cfg,
                  const sim::ParallelOptions& par) {
  if (cfg.tGrid.empty()) throw InvalidInput("verify-clt needs a nonempty t_grid");
  if (cfg.sampleCount < tol::kMinCovarianceSamples)
    throw InvalidInput("verify-clt needs sample_count >= " +
                       std::to_string(tol::kMinCovarianceSamples));
  const ParsedModel pm = centered(raw);
  const int state = require_state(pm, cfg.startState);

  CltReport report;
  report.exactSigma = exact_sigma(pm);
  report.spectralSigma = spectral_sigma(pm);
  report.routeRelError = rel_error(report.exactSigma, report.spectralSigma);

  bool all = true;
  for (const double t : cfg.tGrid) {
    const auto batch = simulate(pm, state, t, cfg.sampleCount, {cfg.seed, cfg.stream}, par);
    const auto emp = sim::empirical_covariance(batch.additive, t);

    CltCell cell;
    cell.t = t;
    cell.sampleCount = cfg.sampleCount;
    cell.empirical = emp.cov.mat();
    cell.se = emp.se;
    cell.mean = emp.mean;
    cell.meanSe = emp.meanSe;
    cell.exactMean = exact_transient_mean(pm, state, t) / std::sqrt(t);
    cell.exactCov = exact_transient_covariance(pm, state, t);

    for (int i = 0; i < cell.empirical.rows(); ++i)
      for (int j = 0; j < cell.empirical.cols(); ++j)
        cell.maxCovZ = std::max(
            cell.maxCovZ, z_score(cell.empirical(i, j) - cell.exactCov(i, j), cell.se(i, j)));
    for (int i = 0; i < cell.mean.size(); ++i)
      cell.maxMeanZ =
          std::max(cell.maxMeanZ, z_score(cell.mean(i) - cell.exactMean(i), cell.meanSe(i)));
    cell.pass = cell.maxCovZ <= kMcZTol && cell.maxMeanZ <= kMcZTol;
    all = all && cell.pass;
    report.cells.push_back(std::move(cell));
  }
  report.pass = all && report.routeRelError <= kRouteRelTol;
  return report;
}

// ---------------------------------------------------------------------------
// characteristic-function rate

double cf_sup_error(const ParsedModel& pm, int state, double t, const Matrix& sigma,
                    double radius, double step) {
  const auto grid = ball_grid(static_cast<int>(sigma.rows()), radius, step);
  const double scale = 1.0 / std::sqrt(t);
  double worst = 0.0;
  for (const auto& zeta : grid) {
    const double target = std::exp(-0.5 * zeta.dot(sigma * zeta));
    const Complex value = phi(pm, state, t, Vector(scale * zeta));
    worst = std::max(worst, std::abs(value - target));
  }
  return worst;
}

CfRateReport run_cf_rate(const ParsedModel& raw, const ExperimentConfig& cfg) {
  if (cfg.tGrid.size() < 2)
    throw InvalidInput("cf-rate needs a t_grid with at least 2 horizons for a rate fit");
  const ParsedModel pm = centered(raw);
  const int state = require_state(pm, cfg.startState);
  require_non_lattice(pm, state, cfg);

  CfRateReport report;
  report.sigma = exact_sigma(pm);
  report.ts = cfg.tGrid;
  for (const double t : cfg.tGrid)
    report.errors.push_back(
        cf_sup_error(pm, state, t, report.sigma, cfg.zetaRadius, cfg.zetaStep));
  report.fit = fit_rate(report.ts, report.errors);
  return report;
}

// ---------------------------------------------------------------------------
// density experiment

double boundary_term(const model::LocalTimeMapModel& m, double t) {
  if (!(t > 0.0)) throw InvalidInput("boundary term needs t > 0");
  const auto sigma = markov::local_time_covariance(m.generator());
  sigma.requirePositiveDefinite();
  const Matrix& s = sigma.mat();
  const auto region = model::support_region(m, t).scaled(1.0 / std::sqrt(t));

  double minDist2 = std::numeric_limits<double>::infinity();
  for (const auto& face : region.faces()) {
    const double spread = face.normal.dot(s * face.normal);
    minDist2 = std::min(minDist2, face.offset * face.offset / spread);
  }
  const int d = sigma.dim();
  const double peak =
      std::pow(2.0 * std::numbers::pi, -0.5 * d) / std::sqrt(s.determinant());
  return peak * std::exp(-0.5 * minDist2);
}

LltReport run_llt_density(const ParsedModel& raw, const ExperimentConfig& cfg,
                          const sim::ParallelOptions& par) {
  if (cfg.tGrid.size() < 2)
    throw InvalidInput("verify-llt needs a t_grid with at least 2 horizons");
  if (cfg.sampleCount < tol::kMinDensitySamples)
    throw InvalidInput("verify-llt needs sample_count >= " +
                       std::to_string(tol::kMinDensitySamples));
  const ParsedModel pm = centered(raw);
  const int state = require_state(pm, cfg.startState);
  if (pm.dim() > 2)
    throw InvalidInput("density experiments support additive dimension 1 or 2, got " +
                       std::to_string(pm.dim()));

  LltReport report;
  report.sigma = exact_sigma(pm);
  const markov::CovarianceMatrix sigma(report.sigma);
  sigma.requirePositiveDefinite();
  const auto grid = sim::default_grid(sigma);
  const auto target = sim::gaussian_density(sigma, grid);

  // Mass of eta_Sigma beyond the grid box, by a per-axis union bound; the
  // +-5 sigma extent keeps this near 1e-6.
  report.tailMassBound = 0.0;
  for (int j = 0; j < grid.dim(); ++j) {
    const double sd = std::sqrt(report.sigma(j, j));
    report.tailMassBound += std_normal_cdf(grid.axis(j).min / sd);
    report.tailMassBound += std_normal_cdf(-grid.axis(j).max() / sd);
  }

  for (const double t : cfg.tGrid) {
    const auto batch = simulate(pm, state, t, cfg.sampleCount, {cfg.seed, cfg.stream}, par);
    const Matrix scaled = batch.additive / std::sqrt(t);
    const Vector base = sim::silverman_bandwidth(scaled) * cfg.bandwidthScale;

    DensityCell cell;
    cell.t = t;
    cell.sampleCount = cfg.sampleCount;
    cell.bandwidth = base;
    const auto supError = [&](double factor, double* massOut) {
      const auto density = sim::kde_density(scaled, grid, Vector(base * factor));
      if (massOut != nullptr) *massOut = density.mass();
      double worst = 0.0;
      for (std::size_t i = 0; i < target.size(); ++i)
        worst = std::max(worst, std::abs(density.values[i] - target[i]));
      return worst;
    };
    cell.supErrorHalfBw = supError(0.5, nullptr);
    cell.supErrorDensity = supError(1.0, &cell.kdeMass);
    cell.supErrorDoubleBw = supError(2.0, nullptr);
    cell.supErrorCF = cf_sup_error(pm, state, t, report.sigma, cfg.zetaRadius, cfg.zetaStep);
    if (!pm.isDiscrete()) cell.boundaryTerm = boundary_term(pm.localTime(), t);
    report.cells.push_back(std::move(cell));
  }

  std::vector<double> densityErrors, cfErrors;
  for (const auto& cell : report.cells) {
    densityErrors.push_back(cell.supErrorDensity);
    cfErrors.push_back(cell.supErrorCF);
  }
  report.densityFit = fit_rate(cfg.tGrid, densityErrors);
  report.cfFit = fit_rate(cfg.tGrid, cfErrors);
  return report;
}

// ---------------------------------------------------------------------------
// lattice scan

LatticeReport run_lattice_scan(const ParsedModel& raw, const ExperimentConfig& cfg) {
  const ParsedModel pm = centered(raw);
  const auto scan = pm.isDiscrete()
                        ? spectral::lattice_scan(pm.discrete(), cfg.scanRadius, cfg.scanStep)
                        : spectral::lattice_scan(pm.localTime(), cfg.scanRadius, cfg.scanStep);
  LatticeReport report;
  report.isLatticeSuspected = scan.isLatticeSuspected;
  report.witnessCount = scan.witnessCount;
  report.maxRadius = scan.maxRadius;
  report.witnesses = scan.witnesses;
  return report;
}

// ---------------------------------------------------------------------------
// model summary

AnalyzeReport run_analyze(const ParsedModel& raw, std::uint64_t seed,
                          const sim::ParallelOptions& par) {
  const ParsedModel pm = centered(raw);
  AnalyzeReport report;
  report.exactSigma = exact_sigma(pm);
  report.spectralSigma = spectral_sigma(pm);
  report.routeRelError = rel_error(report.exactSigma, report.spectralSigma);

  if (pm.isDiscrete()) {
    const auto& m = raw.discrete();
    report.pi = m.stationary().pi;
    report.drift = m.drift();
    const auto flags = markov::check_ip(m.chain());
    report.irreducible = flags.irreducible;
    report.aperiodic = flags.aperiodic;
  } else {
    const auto& m = pm.localTime();
    report.pi = m.stationary().pi;
    report.drift = m.drift();
    report.irreducible = true;  // construction already required it
    for (int i = 0; i < m.states(); ++i)
      report.subgeneratorIrreducible.push_back(markov::subgenerator_irreducible(m.generator(), i));
  }

  report.mcHorizon = 200.0;
  report.mcSamples = 100000;
  const auto batch = simulate(pm, require_state(pm, 1), report.mcHorizon, report.mcSamples,
                              {seed, 0}, par);
  const auto emp = sim::empirical_covariance(batch.additive, report.mcHorizon);
  report.mcSigma = emp.cov.mat();
  report.mcSe = emp.se;
  for (int i = 0; i < report.mcSigma.rows(); ++i)
    for (int j = 0; j < report.mcSigma.cols(); ++j)
      report.maxCovZ = std::max(report.maxCovZ, z_score(report.mcSigma(i, j) -
                                                            report.exactSigma(i, j),
                                                        report.mcSe(i, j)));
  report.agree = report.routeRelError <= kRouteRelTol && report.maxCovZ <= kMcZTol;
  return report;
}

SpectralReport run_spectral(const ParsedModel& raw, const ExperimentConfig& cfg) {
  const ParsedModel pm = centered(raw);
  SpectralReport report;

  const Vector zero = Vector::Zero(pm.dim());
  const auto atZero = pm.isDiscrete() ? fourier::fourier_one_step(pm.discrete(), zero)
                                      : fourier::fourier_matrix(pm.localTime(), 1.0, zero);
  const auto dec = spectral::dominant_eigen(atZero);
  report.gapAtZero = dec.gap;
  report.lambdaSecondModulus = (1.0 - dec.gap) * std::abs(dec.lambda);

  const long half = static_cast<long>(std::floor(cfg.annulusOuter / cfg.zetaStep));
  for (long i = -half; i <= half; ++i) report.axis.push_back(cfg.zetaStep * static_cast<double>(i));
  for (int j = 0; j < pm.dim(); ++j) {
    std::vector<double> curve;
    for (const double s : report.axis) {
      Vector zeta = Vector::Zero(pm.dim());
      zeta(j) = s;
      const auto one = pm.isDiscrete() ? fourier::fourier_one_step(pm.discrete(), zeta)
                                       : fourier::fourier_matrix(pm.localTime(), 1.0, zeta);
      // Spectral radius, not the dominant pair: moduli may tie away from 0.
      curve.push_back(one.mat.eigenvalues().cwiseAbs().maxCoeff());
    }
    report.radiusByAxis.push_back(std::move(curve));
  }

  const std::vector<double> ts{5, 10, 15, 20, 25, 30, 35, 40, 45, 50};
  const int state = require_state(pm, cfg.startState);
  report.annulus =
      pm.isDiscrete()
          ? spectral::annulus_decay(pm.discrete(), state, cfg.annulusDelta, cfg.annulusOuter, ts)
          : spectral::annulus_decay(pm.localTime(), state, cfg.annulusDelta, cfg.annulusOuter, ts);
  return report;
}

}  // namespace mapllt::harness
