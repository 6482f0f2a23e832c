#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "evograph/rng.hpp"
#include "evograph/rules.hpp"
#include "evograph/topology.hpp"

namespace evograph {

enum class Placement { UniformNode, ReservoirOnly, FecundityWeighted };

// uniform_node | uniform, reservoir_only | reservoir, fecundity_weighted | fecundity
Placement parse_placement(std::string_view name);
std::string_view placement_name(Placement p);

// Jump: rejection-free event engine that skips null steps in one geometric
// draw. Step: literal step-by-step execution. Both have the same law for
// (result, steps); their random streams differ.
enum class Engine { Jump, Step };
Engine parse_engine(std::string_view name);
std::string_view engine_name(Engine e);

struct SimConfig {
  double r = 1.0;
  Rule rule = Rule::Bd;
  Placement placement = Placement::UniformNode;
  std::uint64_t seed = 0;
  std::uint64_t max_steps = 0;  // 0: 1000 * N^2
  Engine engine = Engine::Jump;

  void validate() const;  // r finite and > 0
  std::uint64_t step_cap(std::size_t n) const;
};

enum class Result { MutantFixation, MutantExtinction, StepCapReached };
std::string_view result_name(Result r);

struct SimulationOutcome {
  Result result = Result::StepCapReached;
  std::uint64_t steps = 0;
  std::uint64_t seed = 0;
  NodeId initial = 0;
};

// Two-type population with per-class index sets (O(1) swap-remove) and the
// total fitness kept exactly as an integer multiple of 2^-shift.
class PopulationState {
 public:
  PopulationState(std::size_t n, double r);

  std::size_t size() const { return mutant_.size(); }
  std::size_t mutants() const { return mutant_count_; }
  bool is_mutant(NodeId v) const { return mutant_[v] != 0; }
  bool absorbed() const { return mutant_count_ == 0 || mutant_count_ == size(); }
  double r() const { return r_; }

  void set(NodeId v, bool mutant);

  // Members of one class; valid until the next set().
  std::span<const NodeId> members(bool mutant) const;

  double total_fitness() const;
  // Exact F_t, scaled by 2^fitness_shift().
  unsigned __int128 scaled_fitness() const { return scaled_fitness_; }
  unsigned __int128 recompute_scaled_fitness() const;
  int fitness_shift() const { return shift_; }

 private:
  double r_;
  std::vector<std::uint8_t> mutant_;
  // order_[0, m) are mutants, order_[m, n) residents; slot_[v] locates v.
  std::vector<NodeId> order_;
  std::vector<std::uint32_t> slot_;
  std::size_t mutant_count_ = 0;
  unsigned __int128 resident_unit_ = 0, mutant_unit_ = 0, scaled_fitness_ = 0;
  int shift_ = 0;
};

// Draws the node that receives the first mutant. Build once per graph.
class InitialPlacement {
 public:
  // Throws std::invalid_argument for ReservoirOnly on a graph without
  // reservoir nodes.
  InitialPlacement(const GraphTopology& g, Placement p);
  NodeId draw(Rng& rng) const;

 private:
  const GraphTopology* g_;
  Placement placement_;
  std::vector<NodeId> reservoir_;
};

PopulationState place_initial_mutant(const GraphTopology& g, const SimConfig& cfg, Rng& rng);

struct StepEvent {
  NodeId first;    // reproducer for birth-first rules, victim otherwise
  NodeId second;   // the chosen neighbour
  bool changed;    // the replaced node took a different type
};

// One Moran step using class-level fitness sampling. Throws std::logic_error
// on an absorbed state.
StepEvent step(const GraphTopology& g, PopulationState& state, const SimConfig& cfg, Rng& rng);
// Same law as step(), by naive linear scans over every node. Test reference.
StepEvent step_reference(const GraphTopology& g, PopulationState& state, const SimConfig& cfg,
                         Rng& rng);

struct FlipEvent {
  NodeId source;        // node whose type was copied
  NodeId target;        // node that changed type
  bool now_mutant;
  std::uint64_t steps;  // Moran steps elapsed, including null steps
};

// Rejection-free engine. Keeps every neighbour list partitioned mutants-first
// with integer weights, the induced event rates and a sum tree over them.
// The number of null steps before the next effective event is drawn
// geometrically.
class EventEngine {
 public:
  // Throws std::invalid_argument if the weights of a neighbour list cannot be
  // brought to a common 64-bit denominator.
  EventEngine(const GraphTopology& g, double r, Rule rule);

  // All-resident except `mutant`. After a reset the engine's future depends
  // only on the configuration and the random stream, not on earlier runs.
  void reset(NodeId mutant);
  // Arbitrary starting configuration, one byte per node.
  void reset(std::span<const std::uint8_t> mutant);

  // Next effective event, or false when more than `budget` further steps
  // would be needed (steps() is then advanced by budget) or no event can
  // ever occur.
  bool next(Rng& rng, std::uint64_t budget, FlipEvent& out);

  std::size_t size() const { return mutant_.size(); }
  std::size_t mutants() const { return mutant_list_.size(); }
  bool is_mutant(NodeId v) const { return mutant_[v] != 0; }
  bool absorbed() const { return mutants() == 0 || mutants() == size(); }
  std::uint64_t steps() const { return steps_; }
  // Probability that the next step is effective.
  double effective_probability() const;

 private:
  void flip(NodeId v);
  void touch(std::uint32_t group);
  void clear();  // back to all-resident in the construction order
  void refresh(std::size_t group);  // both leaves; propagate() fixes the ancestors
  void propagate();
  std::size_t tree_pick(double u) const;

  double r_;
  Rule rule_;
  std::size_t n_;

  // Nodes whose neighbour lists (out for birth-first rules, in for
  // death-first) are identical share a group, one list and one pair of
  // sum-tree leaves (mutant members, resident members). A flip then touches
  // each group that lists the flipped node once, however many members it has.
  std::vector<std::uint32_t> group_of_;
  std::vector<std::size_t> offset_;      // group -> its list, CSR
  std::vector<NodeId> entry_node_;       // neighbour of each entry
  std::vector<std::int64_t> entry_w_;    // weight in units of 1 / den_[group]
  std::vector<std::uint32_t> slot_;      // entry -> slot within its list
  std::vector<std::uint32_t> at_slot_;   // list slot -> entry
  std::vector<std::int64_t> den_, wm_, wt_;
  std::vector<std::uint32_t> km_;        // mutant entries at the front of each list
  std::vector<std::uint8_t> uniform_;    // all weights in the list are equal
  // Members of each group, mutants first.
  std::vector<std::size_t> member_offset_;
  std::vector<NodeId> members_;
  std::vector<std::uint32_t> member_slot_;
  std::vector<std::uint32_t> mcount_;
  std::vector<NodeId> canonical_members_;
  // Groups whose orderings moved since the last clear().
  std::vector<std::uint8_t> touched_;
  std::vector<std::uint32_t> touched_list_;
  // Entries that name node v, with the group owning each.
  std::vector<std::size_t> watch_offset_;
  std::vector<std::size_t> watch_entry_;
  std::vector<std::uint32_t> watch_group_;

  std::vector<std::uint8_t> mutant_;
  std::vector<NodeId> mutant_list_;
  std::vector<std::uint32_t> mutant_pos_;

  // Leaf 2g holds group g's resident members, leaf 2g+1 its mutants.
  std::size_t leaves_ = 1;
  std::vector<double> tree_;
  std::vector<std::uint64_t> stamp_;  // per internal node, last epoch queued
  std::vector<std::size_t> dirty_, next_dirty_;
  std::uint64_t epoch_ = 1;
  std::uint64_t steps_ = 0;
};

// Runs one trajectory from a placed mutant until absorption or the step cap.
// Identical (g, cfg) reproduce identical outcomes.
SimulationOutcome run_to_absorption(const GraphTopology& g, const SimConfig& cfg, Rng& rng);
SimulationOutcome run_to_absorption(const GraphTopology& g, const SimConfig& cfg);

}  // namespace evograph
