#pragma once

#include <cstdint>
#include <string>

#include "evograph/dynamics.hpp"

namespace evograph {

inline constexpr double kZ95 = 1.959963984540054;

struct WilsonInterval {
  double lo = 0.0;
  double hi = 1.0;
};

// Wilson score interval; [0, 1] when trials == 0.
WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = kZ95);

struct EstimateReport {
  std::uint64_t requested = 0;  // replicas run
  std::uint64_t successes = 0;
  std::uint64_t failures = 0;
  std::uint64_t capped = 0;     // hit the step cap; excluded from the proportion
  std::uint64_t trials = 0;     // successes + failures
  double p = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 1.0;
  std::uint64_t seed = 0;
  std::uint64_t steps_total = 0;
  double wall_seconds = 0.0;
  std::string warning;
};

// Replica i runs with Rng(cfg.seed + i). Aggregation uses counts only, so the
// report does not depend on the number of workers (except wall_seconds).
// workers == 0 picks worker_count().
EstimateReport estimate_fixation(const GraphTopology& g, const SimConfig& cfg, std::uint64_t trials,
                                 unsigned workers = 0);

// Success: two reservoir nodes are mutants at once. Failure: no reservoir
// mutant is left. Stem and root mutants are ignored. Requires a superstar
// graph with at least two reservoir nodes and reservoir placement.
EstimateReport estimate_one_to_two(const GraphTopology& g, const SimConfig& cfg, std::uint64_t trials,
                                  unsigned workers = 0);

// Worker threads for `jobs` independent jobs: hardware concurrency, capped by
// EVOGRAPH_THREADS when set to a positive integer.
unsigned worker_count(std::uint64_t jobs);

}  // namespace evograph
