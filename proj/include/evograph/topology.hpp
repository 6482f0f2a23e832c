#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "evograph/rational.hpp"

namespace evograph {

using NodeId = std::uint32_t;

enum class NodeRole : std::uint8_t { Root, Reservoir, Stem, Plain };

struct NodeTag {
  NodeRole role = NodeRole::Plain;
  int branch = -1;    // Reservoir and Stem only
  int position = -1;  // Stem only, 1..H

  friend bool operator==(const NodeTag&, const NodeTag&) = default;
};

struct Edge {
  NodeId source;
  NodeId target;
  Rational weight;
};

// B branches, each a reservoir of L nodes feeding a directed stem of H nodes
// whose last node feeds the shared root.
struct SuperstarSpec {
  int branches = 1;   // B
  int reservoir = 1;  // L
  int stem = 2;       // H

  int structural_k() const { return stem + 2; }
  std::int64_t node_count() const {
    return static_cast<std::int64_t>(branches) * (reservoir + stem) + 1;
  }
  std::int64_t reservoir_nodes() const { return static_cast<std::int64_t>(branches) * reservoir; }

  // Throws std::invalid_argument on B < 1, L < 1 or H < 2.
  void validate() const;
};

enum class FamilyKind { Complete, DirectedCycle, Star };

// Immutable weighted digraph. Out-weights of every node sum to exactly 1.
//
// Adjacency is stored twice in CSR form (by source and by target) so that
// birth-first and death-first update rules can both walk their neighbourhoods
// in O(degree).
class GraphTopology {
 public:
  // Raw-graph entry point. Validates node ids, weights in (0, 1] and unit
  // out-weight per node; self-loops are tolerated here (never produced by the
  // builders). Throws std::invalid_argument.
  static GraphTopology from_edges(std::size_t n, std::vector<Edge> edges,
                                  std::vector<NodeTag> roles = {});

  std::size_t size() const { return roles_.size(); }
  std::size_t edge_count() const { return out_targets_.size(); }

  std::span<const NodeId> out_neighbours(NodeId v) const {
    return {out_targets_.data() + out_offsets_[v], out_offsets_[v + 1] - out_offsets_[v]};
  }
  std::span<const Rational> out_weights(NodeId v) const {
    return {out_weights_.data() + out_offsets_[v], out_offsets_[v + 1] - out_offsets_[v]};
  }
  std::span<const NodeId> in_neighbours(NodeId v) const {
    return {in_sources_.data() + in_offsets_[v], in_offsets_[v + 1] - in_offsets_[v]};
  }
  std::span<const Rational> in_weights(NodeId v) const {
    return {in_weights_.data() + in_offsets_[v], in_offsets_[v + 1] - in_offsets_[v]};
  }

  const NodeTag& tag(NodeId v) const { return roles_[v]; }
  std::span<const NodeTag> roles() const { return roles_; }
  std::vector<NodeId> nodes_with_role(NodeRole role) const;

  // Present only for graphs produced by build_superstar.
  const std::optional<SuperstarSpec>& superstar() const { return superstar_; }

  std::vector<Edge> edges() const;

 private:
  friend GraphTopology build_superstar(const SuperstarSpec&);

  std::vector<std::size_t> out_offsets_, in_offsets_;
  std::vector<NodeId> out_targets_, in_sources_;
  std::vector<Rational> out_weights_, in_weights_;
  std::vector<NodeTag> roles_;
  std::optional<SuperstarSpec> superstar_;
};

// Node layout: root = 0, then reservoirs branch-major (1 + b*L + j), then
// stems branch-major (1 + B*L + b*H + (i-1)) for stem position i in 1..H.
GraphTopology build_superstar(const SuperstarSpec& spec);

// complete: K_n; directed_cycle: i -> i+1 mod n; star: hub 0 <-> n-1 leaves.
GraphTopology build_family(FamilyKind kind, std::size_t n);
FamilyKind parse_family(std::string_view name);  // complete | cycle | directed_cycle | star

// Node-wise weighted in-degree equals weighted out-degree, in exact arithmetic.
bool is_circulation(const GraphTopology& g);

bool is_strongly_connected(const GraphTopology& g);

// {"n": N, "roles": [...], "edges": [[src, dst, "p/q"], ...]}
std::string graph_to_json(const GraphTopology& g);
GraphTopology graph_from_json(std::string_view text);

std::string_view role_name(NodeRole role);

}  // namespace evograph
