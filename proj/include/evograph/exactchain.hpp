#pragma once

// Exact fixation probabilities from the absorbing chain over all 2^N
// mutant configurations (bit v set = node v mutant).

#include <cstdint>
#include <string>
#include <vector>

#include "evograph/rational.hpp"
#include "evograph/rules.hpp"
#include "evograph/topology.hpp"

namespace evograph {

using Configuration = std::uint32_t;

inline constexpr std::size_t kDefaultExactCap = 16;

struct ExactFixation {
  std::vector<double> per_node;  // P(fixation | single mutant at v)
  double average = 0.0;          // uniform placement
  double residual = 0.0;         // max-norm residual of the solved system
  bool strongly_connected = true;
  std::string warning;           // set when the graph is not strongly connected
};

// Throws std::invalid_argument when N exceeds `cap` (hard ceiling 24) and
// std::runtime_error when the solve misses the 1e-12 residual gate.
ExactFixation exact_fixation(const GraphTopology& g, double r, Rule rule,
                             std::size_t cap = kDefaultExactCap);

struct Transition {
  Configuration next;
  BigRational probability;
};

// Successor distribution of one Moran step from `state`, exactly. The entry
// with next == state is the null-step mass; probabilities sum to 1.
// Throws std::invalid_argument on an absorbing state or N > 32.
std::vector<Transition> exact_transition_row(const GraphTopology& g, Configuration state,
                                             const BigRational& r, Rule rule);

}  // namespace evograph
