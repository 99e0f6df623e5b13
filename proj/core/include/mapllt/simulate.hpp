#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "mapllt/models.hpp"
#include "mapllt/rng.hpp"
#include "mapllt/types.hpp"

// ---------------------------------------------------------------------------
// Seeded Monte Carlo for both model families. Paths are independent Philox
// streams keyed by (masterSeed, streamIndex, pathIndex); batches are cut into
// fixed-width chunks so every thread count produces identical output.
// ---------------------------------------------------------------------------

namespace mapllt::sim {

struct ParallelOptions {
  int threads = 1;                // 0 = hardware concurrency
  std::size_t chunkSize = 16384;  // fixed width keeps results thread-count independent
};

// One simulated path. `additive` is the centered component Y (projected to
// n-1 coordinates for local-time models); `localTimes` is the raw sojourn
// vector for local-time models and empty otherwise.
struct PathSample {
  int startState = 0;
  int endState = 0;
  double horizon = 0.0;
  Vector additive;
  Vector localTimes;
};

// Column-per-coordinate sample store; row i is path i.
struct SampleBatch {
  int startState = 0;
  double horizon = 0.0;
  Matrix additive;
  std::vector<std::int16_t> endState;
};

// Runs fn(firstPath, count) over [0, paths) in fixed chunks across threads.
// Chunks write disjoint outputs, so scheduling order never shows in results.
void run_chunked(std::size_t paths, const ParallelOptions& opts,
                 const std::function<void(std::size_t, std::size_t)>& fn);

// Single-path simulators, deterministic given the stream.
PathSample simulate_discrete_path(const model::DiscreteMapModel& m, int k0, long steps,
                                  PhiloxRng& rng);
PathSample simulate_local_time_path(const model::LocalTimeMapModel& m, int k0, double t,
                                    PhiloxRng& rng);

// Batch simulation of (X_n, Y_n) at integer horizon `steps`.
SampleBatch simulate_discrete(const model::DiscreteMapModel& m, int k0, long steps,
                              std::size_t paths, SeedSpec seed,
                              const ParallelOptions& opts = {});

// Batch simulation of the jump process on [0, t]: exponential holding times,
// final sojourn reconciled so <L, 1> = t, output projected and centered.
SampleBatch simulate_ctmc_local_times(const model::LocalTimeMapModel& m, int k0, double t,
                                      std::size_t paths, SeedSpec seed,
                                      const ParallelOptions& opts = {});

}  // namespace mapllt::sim
