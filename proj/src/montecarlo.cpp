#include "evograph/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <thread>
#include <vector>

namespace evograph {
namespace {

enum class Verdict { Success, Failure, Capped };

struct Tally {
  std::uint64_t successes = 0, failures = 0, capped = 0, steps = 0;
};

// One replica. With a reservoir mask the replica stops at the one-to-two
// decision; without it, at absorption.
class Replica {
 public:
  Replica(const GraphTopology& g, const SimConfig& cfg, const std::vector<std::uint8_t>* reservoir)
      : g_(g), cfg_(cfg), reservoir_(reservoir), placement_(g, cfg.placement), cap_(cfg.step_cap(g.size())) {
    if (cfg.engine == Engine::Jump) engine_.emplace(g, cfg.r, cfg.rule);
  }

  Verdict run(std::uint64_t seed, std::uint64_t& steps) {
    Rng rng(seed);
    const NodeId initial = placement_.draw(rng);
    std::size_t in_reservoir = reservoir_ && (*reservoir_)[initial] ? 1 : 0;
    auto decided = [&](std::size_t mutants) -> std::optional<Verdict> {
      if (reservoir_) {
        if (in_reservoir >= 2) return Verdict::Success;
        if (in_reservoir == 0) return Verdict::Failure;
        return std::nullopt;
      }
      if (mutants == g_.size()) return Verdict::Success;
      if (mutants == 0) return Verdict::Failure;
      return std::nullopt;
    };
    auto track = [&](NodeId target, bool now_mutant) {
      if (reservoir_ && (*reservoir_)[target]) in_reservoir += now_mutant ? 1 : std::size_t(-1);
    };

    if (engine_) {
      EventEngine& e = *engine_;
      e.reset(initial);
      FlipEvent ev{};
      std::optional<Verdict> v = decided(e.mutants());
      while (!v) {
        if (!e.next(rng, cap_ - e.steps(), ev)) {
          steps = cap_;
          return Verdict::Capped;
        }
        track(ev.target, ev.now_mutant);
        v = decided(e.mutants());
      }
      steps = e.steps();
      return *v;
    }

    PopulationState state(g_.size(), cfg_.r);
    state.set(initial, true);
    std::uint64_t n = 0;
    std::optional<Verdict> v = decided(state.mutants());
    while (!v) {
      if (n == cap_) {
        steps = cap_;
        return Verdict::Capped;
      }
      const StepEvent ev = step(g_, state, cfg_, rng);
      ++n;
      if (ev.changed) {
        const NodeId target = birth_first(cfg_.rule) ? ev.second : ev.first;
        track(target, state.is_mutant(target));
      }
      v = decided(state.mutants());
    }
    steps = n;
    return *v;
  }

 private:
  const GraphTopology& g_;
  const SimConfig& cfg_;
  const std::vector<std::uint8_t>* reservoir_;
  InitialPlacement placement_;
  std::uint64_t cap_;
  std::optional<EventEngine> engine_;
};

EstimateReport run_replicas(const GraphTopology& g, const SimConfig& cfg, std::uint64_t trials,
                            const std::vector<std::uint8_t>* reservoir, unsigned requested_workers) {
  cfg.validate();
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  const auto start = std::chrono::steady_clock::now();
  // Validates placement before any thread starts.
  InitialPlacement(g, cfg.placement);

  constexpr std::uint64_t kChunk = 64;
  std::atomic<std::uint64_t> next{0};
  const std::uint64_t chunks = (trials + kChunk - 1) / kChunk;
  const unsigned workers = requested_workers == 0
                               ? worker_count(chunks)
                               : static_cast<unsigned>(std::min<std::uint64_t>(requested_workers, chunks));
  std::vector<Tally> tallies(workers);
  auto work = [&](unsigned id) {
    Replica replica(g, cfg, reservoir);
    Tally& t = tallies[id];
    for (;;) {
      const std::uint64_t first = next.fetch_add(kChunk);
      if (first >= trials) break;
      const std::uint64_t last = std::min(trials, first + kChunk);
      for (std::uint64_t i = first; i < last; ++i) {
        std::uint64_t steps = 0;
        switch (replica.run(cfg.seed + i, steps)) {
          case Verdict::Success: ++t.successes; break;
          case Verdict::Failure: ++t.failures; break;
          case Verdict::Capped: ++t.capped; break;
        }
        t.steps += steps;
      }
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned id = 0; id < workers; ++id) pool.emplace_back(work, id);
    for (auto& th : pool) th.join();
  }

  EstimateReport rep;
  rep.requested = trials;
  rep.seed = cfg.seed;
  for (const Tally& t : tallies) {
    rep.successes += t.successes;
    rep.failures += t.failures;
    rep.capped += t.capped;
    rep.steps_total += t.steps;
  }
  rep.trials = rep.successes + rep.failures;
  rep.p = rep.trials ? static_cast<double>(rep.successes) / static_cast<double>(rep.trials) : 0.0;
  const WilsonInterval ci = wilson_interval(rep.successes, rep.trials);
  rep.ci_lo = ci.lo;
  rep.ci_hi = ci.hi;
  if (rep.capped) {
    rep.warning = std::to_string(rep.capped) + " replicas hit the step cap and were excluded";
  }
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

}  // namespace

WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z) {
  if (successes > trials) throw std::invalid_argument("successes exceed trials");
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double centre = (p + z2 / (2.0 * n)) / denom;
  const double half = z / denom * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  WilsonInterval ci{std::max(0.0, centre - half), std::min(1.0, centre + half)};
  if (successes == 0) ci.lo = 0.0;
  if (successes == trials) ci.hi = 1.0;
  // Guard against rounding pushing the bounds past the point estimate.
  ci.lo = std::min(ci.lo, p);
  ci.hi = std::max(ci.hi, p);
  return ci;
}

unsigned worker_count(std::uint64_t jobs) {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("EVOGRAPH_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && cap > 0) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
  }
  return static_cast<unsigned>(std::clamp<std::uint64_t>(jobs, 1, n));
}

EstimateReport estimate_fixation(const GraphTopology& g, const SimConfig& cfg, std::uint64_t trials,
                                 unsigned workers) {
  return run_replicas(g, cfg, trials, nullptr, workers);
}

EstimateReport estimate_one_to_two(const GraphTopology& g, const SimConfig& cfg, std::uint64_t trials,
                                  unsigned workers) {
  if (!g.superstar()) throw std::invalid_argument("one-to-two needs a superstar graph");
  if (cfg.placement != Placement::ReservoirOnly) {
    throw std::invalid_argument("one-to-two needs reservoir placement");
  }
  if (g.superstar()->reservoir_nodes() < 2) throw std::invalid_argument("one-to-two needs B*L >= 2");
  std::vector<std::uint8_t> reservoir(g.size(), 0);
  for (NodeId v : g.nodes_with_role(NodeRole::Reservoir)) reservoir[v] = 1;
  return run_replicas(g, cfg, trials, &reservoir, workers);
}

}  // namespace evograph
