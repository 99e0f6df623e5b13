#include "mapllt/simulate.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace mapllt::sim {
namespace {

int resolve_threads(const ParallelOptions& opts) {
  if (opts.threads < 0) throw InvalidInput("ParallelOptions: negative thread count");
  if (opts.threads > 0) return opts.threads;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

int require_state(int k, int n, const char* what) {
  if (k < 0 || k >= n) {
    throw InvalidInput(std::string(what) + ": start state " + std::to_string(k) +
                       " out of range");
  }
  return k;
}

// Row-wise transition CDFs over positive entries; `target[k]` pairs each
// cumulative weight with its destination state.
struct RowCdf {
  std::vector<double> cdf;
  std::vector<int> dest;

  int draw(double u) const {
    for (std::size_t i = 0; i + 1 < cdf.size(); ++i) {
      if (u < cdf[i]) return dest[i];
    }
    return dest.back();  // absorbs rounding at the top of the scale
  }
};

std::vector<RowCdf> build_row_cdfs(const Matrix& weights) {
  const int n = static_cast<int>(weights.rows());
  std::vector<RowCdf> rows(n);
  for (int k = 0; k < n; ++k) {
    double acc = 0.0;
    for (int l = 0; l < n; ++l) {
      if (weights(k, l) > 0.0) {
        acc += weights(k, l);
        rows[k].cdf.push_back(acc);
        rows[k].dest.push_back(l);
      }
    }
    if (rows[k].dest.empty()) {
      throw InvalidInput("simulate: state " + std::to_string(k + 1) + " has no outflow");
    }
    // Normalize so the scale of u matches the scale of the weights.
    for (double& c : rows[k].cdf) c /= acc;
  }
  return rows;
}

// Jump-chain CDFs of a generator: off-diagonal rates, normalized per row.
Matrix off_diagonal(const Matrix& g) {
  Matrix w = g;
  w.diagonal().setZero();
  return w;
}

}  // namespace

void run_chunked(std::size_t paths, const ParallelOptions& opts,
                 const std::function<void(std::size_t, std::size_t)>& fn) {
  if (paths == 0) return;
  if (opts.chunkSize == 0) throw InvalidInput("ParallelOptions: chunk size must be positive");
  const std::size_t chunkCount = (paths + opts.chunkSize - 1) / opts.chunkSize;
  const int workers =
      static_cast<int>(std::min<std::size_t>(resolve_threads(opts), chunkCount));
  if (workers <= 1) {
    for (std::size_t c = 0; c < chunkCount; ++c) {
      const std::size_t first = c * opts.chunkSize;
      fn(first, std::min(opts.chunkSize, paths - first));
    }
    return;
  }

  std::atomic<std::size_t> nextChunk{0};
  std::exception_ptr firstError;
  std::mutex errorMutex;
  auto work = [&]() {
    while (true) {
      const std::size_t c = nextChunk.fetch_add(1);
      if (c >= chunkCount) return;
      try {
        const std::size_t first = c * opts.chunkSize;
        fn(first, std::min(opts.chunkSize, paths - first));
      } catch (...) {
        std::lock_guard<std::mutex> lock(errorMutex);
        if (!firstError) firstError = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int i = 0; i < workers; ++i) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (firstError) std::rethrow_exception(firstError);
}

// ---------------------------------------------------------------------------
// Discrete walks
// ---------------------------------------------------------------------------

namespace {

// Hot loop shared by the single-path and batch entry points; writes Y into
// `out` (length d) and returns the end state.
int discrete_path_into(const model::DiscreteMapModel& m, const std::vector<RowCdf>& rows,
                       int k0, long steps, PhiloxRng& rng, double* out) {
  const int d = m.dim();
  std::vector<double> draw(d);
  for (int j = 0; j < d; ++j) out[j] = 0.0;
  int state = k0;
  for (long s = 0; s < steps; ++s) {
    const int next = rows[state].draw(rng.nextUnit());
    m.law(state, next).sample(rng, draw.data());
    for (int j = 0; j < d; ++j) out[j] += draw[j];
    state = next;
  }
  for (int j = 0; j < d; ++j) out[j] -= static_cast<double>(steps) * m.drift()(j);
  return state;
}

}  // namespace

PathSample simulate_discrete_path(const model::DiscreteMapModel& m, int k0, long steps,
                                  PhiloxRng& rng) {
  require_state(k0, m.states(), "simulate_discrete_path");
  if (steps < 1) throw InvalidInput("simulate_discrete_path: need steps >= 1");
  const auto rows = build_row_cdfs(m.chain().mat());
  PathSample sample;
  sample.startState = k0;
  sample.horizon = static_cast<double>(steps);
  sample.additive = Vector::Zero(m.dim());
  sample.endState = discrete_path_into(m, rows, k0, steps, rng, sample.additive.data());
  return sample;
}

SampleBatch simulate_discrete(const model::DiscreteMapModel& m, int k0, long steps,
                              std::size_t paths, SeedSpec seed, const ParallelOptions& opts) {
  require_state(k0, m.states(), "simulate_discrete");
  if (steps < 1) throw InvalidInput("simulate_discrete: need steps >= 1");
  if (paths < 1) throw InvalidInput("simulate_discrete: need paths >= 1");
  const auto rows = build_row_cdfs(m.chain().mat());

  SampleBatch batch;
  batch.startState = k0;
  batch.horizon = static_cast<double>(steps);
  batch.additive.resize(static_cast<Eigen::Index>(paths), m.dim());
  batch.endState.resize(paths);
  run_chunked(paths, opts, [&](std::size_t first, std::size_t count) {
    std::vector<double> y(m.dim());
    for (std::size_t i = first; i < first + count; ++i) {
      PhiloxRng rng(seed, static_cast<std::uint32_t>(i));
      const int end = discrete_path_into(m, rows, k0, steps, rng, y.data());
      for (int j = 0; j < m.dim(); ++j) batch.additive(static_cast<Eigen::Index>(i), j) = y[j];
      batch.endState[i] = static_cast<std::int16_t>(end);
    }
  });
  return batch;
}

// ---------------------------------------------------------------------------
// Jump-process local times
// ---------------------------------------------------------------------------

namespace {

struct CtmcTables {
  Vector exitRate;           // -G_kk
  std::vector<RowCdf> jump;  // destinations proportional to off-diagonal rates
};

CtmcTables build_ctmc_tables(const model::LocalTimeMapModel& m) {
  CtmcTables tables;
  tables.exitRate = -m.generator().mat().diagonal();
  if ((tables.exitRate.array() <= 0.0).any()) {
    throw InvalidInput("simulate_ctmc_local_times: a state has no outflow");
  }
  tables.jump = build_row_cdfs(off_diagonal(m.generator().mat()));
  return tables;
}

// Simulates one trajectory, writing raw local times into `l` (length n) and
// the projected centered component into `y` (length n-1); returns end state.
int local_time_path_into(const model::LocalTimeMapModel& m, const CtmcTables& tables, int k0,
                         double t, PhiloxRng& rng, double* l, double* y) {
  const int n = m.states();
  const bool twoStates = n == 2;
  for (int j = 0; j < n; ++j) l[j] = 0.0;
  int state = k0;
  double clock = 0.0;
  while (true) {
    const double hold = rng.nextExponential(tables.exitRate(state));
    if (clock + hold >= t) {
      l[state] += t - clock;  // final sojourn reconciled exactly to t
      break;
    }
    l[state] += hold;
    clock += hold;
    state = twoStates ? 1 - state : tables.jump[state].draw(rng.nextUnit());
  }
  double total = 0.0;
  for (int j = 0; j < n; ++j) total += l[j];
  if (std::abs(total - t) > tol::kLocalTimeConservation) {
    throw NumericalInstability("simulate_ctmc_local_times: local times sum to " +
                               std::to_string(total) + " over horizon " + std::to_string(t));
  }
  for (int j = 0; j < n - 1; ++j) y[j] = l[j] - t * m.drift()(j);
  return state;
}

}  // namespace

PathSample simulate_local_time_path(const model::LocalTimeMapModel& m, int k0, double t,
                                    PhiloxRng& rng) {
  require_state(k0, m.states(), "simulate_local_time_path");
  if (!(t > 0.0)) throw InvalidInput("simulate_local_time_path: need t > 0");
  const CtmcTables tables = build_ctmc_tables(m);
  PathSample sample;
  sample.startState = k0;
  sample.horizon = t;
  sample.localTimes = Vector::Zero(m.states());
  sample.additive = Vector::Zero(m.projectedDim());
  sample.endState = local_time_path_into(m, tables, k0, t, rng, sample.localTimes.data(),
                                         sample.additive.data());
  return sample;
}

SampleBatch simulate_ctmc_local_times(const model::LocalTimeMapModel& m, int k0, double t,
                                      std::size_t paths, SeedSpec seed,
                                      const ParallelOptions& opts) {
  require_state(k0, m.states(), "simulate_ctmc_local_times");
  if (!(t > 0.0)) throw InvalidInput("simulate_ctmc_local_times: need t > 0");
  if (paths < 1) throw InvalidInput("simulate_ctmc_local_times: need paths >= 1");
  const CtmcTables tables = build_ctmc_tables(m);

  SampleBatch batch;
  batch.startState = k0;
  batch.horizon = t;
  batch.additive.resize(static_cast<Eigen::Index>(paths), m.projectedDim());
  batch.endState.resize(paths);
  run_chunked(paths, opts, [&](std::size_t first, std::size_t count) {
    std::vector<double> l(m.states());
    std::vector<double> y(m.projectedDim());
    for (std::size_t i = first; i < first + count; ++i) {
      PhiloxRng rng(seed, static_cast<std::uint32_t>(i));
      const int end = local_time_path_into(m, tables, k0, t, rng, l.data(), y.data());
      for (int j = 0; j < m.projectedDim(); ++j) {
        batch.additive(static_cast<Eigen::Index>(i), j) = y[j];
      }
      batch.endState[i] = static_cast<std::int16_t>(end);
    }
  });
  return batch;
}

}  // namespace mapllt::sim
