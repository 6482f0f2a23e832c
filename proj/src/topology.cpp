#include "evograph/topology.hpp"

#include <algorithm>
#include <stdexcept>

#include <json.hpp>

namespace evograph {
namespace {

void fill_csr(std::size_t n, const std::vector<Edge>& edges, bool by_source,
              std::vector<std::size_t>& offsets, std::vector<NodeId>& other,
              std::vector<Rational>& weights) {
  offsets.assign(n + 1, 0);
  for (const auto& e : edges) ++offsets[(by_source ? e.source : e.target) + 1];
  for (std::size_t i = 0; i < n; ++i) offsets[i + 1] += offsets[i];
  other.resize(edges.size());
  weights.resize(edges.size());
  std::vector<std::size_t> cursor(offsets.begin(), offsets.end() - 1);
  for (const auto& e : edges) {
    auto slot = cursor[by_source ? e.source : e.target]++;
    other[slot] = by_source ? e.target : e.source;
    weights[slot] = e.weight;
  }
}

std::vector<bool> reachable(const GraphTopology& g, bool forward) {
  std::vector<bool> seen(g.size(), false);
  if (g.size() == 0) return seen;
  std::vector<NodeId> stack{0};
  seen[0] = true;
  while (!stack.empty()) {
    NodeId v = stack.back();
    stack.pop_back();
    for (NodeId w : forward ? g.out_neighbours(v) : g.in_neighbours(v)) {
      if (!seen[w]) {
        seen[w] = true;
        stack.push_back(w);
      }
    }
  }
  return seen;
}

NodeRole parse_role(std::string_view s) {
  if (s == "root") return NodeRole::Root;
  if (s == "reservoir") return NodeRole::Reservoir;
  if (s == "stem") return NodeRole::Stem;
  if (s == "plain") return NodeRole::Plain;
  throw std::invalid_argument("unknown node role '" + std::string(s) + "'");
}

}  // namespace

void SuperstarSpec::validate() const {
  if (branches < 1) throw std::invalid_argument("superstar needs B >= 1");
  if (reservoir < 1) throw std::invalid_argument("superstar needs L >= 1");
  if (stem < 2) throw std::invalid_argument("superstar needs H >= 2");
  if (node_count() > static_cast<std::int64_t>(UINT32_MAX)) {
    throw std::invalid_argument("superstar too large for 32-bit node ids");
  }
}

GraphTopology GraphTopology::from_edges(std::size_t n, std::vector<Edge> edges,
                                        std::vector<NodeTag> roles) {
  if (n == 0) throw std::invalid_argument("graph must have at least one node");
  if (roles.empty()) roles.assign(n, NodeTag{});
  if (roles.size() != n) throw std::invalid_argument("role list length differs from node count");

  std::vector<Rational> out_sum(n, Rational(0));
  for (const auto& e : edges) {
    if (e.source >= n || e.target >= n) throw std::invalid_argument("edge endpoint out of range");
    if (e.weight <= Rational(0) || e.weight > Rational(1)) {
      throw std::invalid_argument("edge weight must lie in (0, 1]");
    }
    out_sum[e.source] += e.weight;
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (out_sum[v] != Rational(1)) {
      throw std::invalid_argument("out-weights of node " + std::to_string(v) + " sum to " +
                                  out_sum[v].to_string() + ", expected 1");
    }
  }

  std::stable_sort(edges.begin(), edges.end(),
                   [](const Edge& a, const Edge& b) { return a.source < b.source; });
  GraphTopology g;
  fill_csr(n, edges, true, g.out_offsets_, g.out_targets_, g.out_weights_);
  fill_csr(n, edges, false, g.in_offsets_, g.in_sources_, g.in_weights_);
  g.roles_ = std::move(roles);
  return g;
}

std::vector<NodeId> GraphTopology::nodes_with_role(NodeRole role) const {
  std::vector<NodeId> out;
  for (NodeId v = 0; v < size(); ++v) {
    if (roles_[v].role == role) out.push_back(v);
  }
  return out;
}

std::vector<Edge> GraphTopology::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count());
  for (NodeId v = 0; v < size(); ++v) {
    auto targets = out_neighbours(v);
    auto weights = out_weights(v);
    for (std::size_t i = 0; i < targets.size(); ++i) out.push_back({v, targets[i], weights[i]});
  }
  return out;
}

GraphTopology build_superstar(const SuperstarSpec& spec) {
  spec.validate();
  const auto B = static_cast<NodeId>(spec.branches);
  const auto L = static_cast<NodeId>(spec.reservoir);
  const auto H = static_cast<NodeId>(spec.stem);
  const auto n = static_cast<std::size_t>(spec.node_count());
  const NodeId stem_base = 1 + B * L;
  auto stem_node = [&](NodeId b, NodeId i) { return stem_base + b * H + (i - 1); };

  std::vector<NodeTag> roles(n);
  roles[0] = {NodeRole::Root, -1, -1};
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(2 * B * L + B * H));
  const Rational root_weight(1, static_cast<std::int64_t>(B) * L);
  for (NodeId k = 0; k < B * L; ++k) edges.push_back({0, 1 + k, root_weight});
  for (NodeId b = 0; b < B; ++b) {
    for (NodeId j = 0; j < L; ++j) {
      NodeId v = 1 + b * L + j;
      roles[v] = {NodeRole::Reservoir, static_cast<int>(b), -1};
      edges.push_back({v, stem_node(b, 1), Rational(1)});
    }
    for (NodeId i = 1; i <= H; ++i) {
      NodeId v = stem_node(b, i);
      roles[v] = {NodeRole::Stem, static_cast<int>(b), static_cast<int>(i)};
      edges.push_back({v, i < H ? stem_node(b, i + 1) : 0, Rational(1)});
    }
  }
  GraphTopology g = GraphTopology::from_edges(n, std::move(edges), std::move(roles));
  g.superstar_ = spec;
  return g;
}

GraphTopology build_family(FamilyKind kind, std::size_t n) {
  if (n < 2) throw std::invalid_argument("graph family needs at least 2 nodes");
  if (n > UINT32_MAX) throw std::invalid_argument("graph too large for 32-bit node ids");
  std::vector<Edge> edges;
  std::vector<NodeTag> roles(n);
  const auto nn = static_cast<NodeId>(n);
  switch (kind) {
    case FamilyKind::Complete: {
      const Rational w(1, static_cast<std::int64_t>(n - 1));
      edges.reserve(n * (n - 1));
      for (NodeId u = 0; u < nn; ++u) {
        for (NodeId v = 0; v < nn; ++v) {
          if (u != v) edges.push_back({u, v, w});
        }
      }
      break;
    }
    case FamilyKind::DirectedCycle:
      for (NodeId u = 0; u < nn; ++u) edges.push_back({u, (u + 1) % nn, Rational(1)});
      break;
    case FamilyKind::Star: {
      const Rational w(1, static_cast<std::int64_t>(n - 1));
      roles[0] = {NodeRole::Root, -1, -1};
      for (NodeId leaf = 1; leaf < nn; ++leaf) {
        edges.push_back({0, leaf, w});
        edges.push_back({leaf, 0, Rational(1)});
        roles[leaf] = {NodeRole::Reservoir, 0, -1};
      }
      break;
    }
  }
  return GraphTopology::from_edges(n, std::move(edges), std::move(roles));
}

FamilyKind parse_family(std::string_view name) {
  if (name == "complete") return FamilyKind::Complete;
  if (name == "cycle" || name == "directed_cycle") return FamilyKind::DirectedCycle;
  if (name == "star") return FamilyKind::Star;
  throw std::invalid_argument("unknown graph family '" + std::string(name) + "'");
}

bool is_circulation(const GraphTopology& g) {
  for (NodeId v = 0; v < g.size(); ++v) {
    Rational in(0), out(0);
    for (const auto& w : g.in_weights(v)) in += w;
    for (const auto& w : g.out_weights(v)) out += w;
    if (in != out) return false;
  }
  return true;
}

bool is_strongly_connected(const GraphTopology& g) {
  auto fwd = reachable(g, true);
  auto bwd = reachable(g, false);
  return std::all_of(fwd.begin(), fwd.end(), [](bool b) { return b; }) &&
         std::all_of(bwd.begin(), bwd.end(), [](bool b) { return b; });
}

std::string_view role_name(NodeRole role) {
  switch (role) {
    case NodeRole::Root: return "root";
    case NodeRole::Reservoir: return "reservoir";
    case NodeRole::Stem: return "stem";
    case NodeRole::Plain: return "plain";
  }
  return "plain";
}

std::string graph_to_json(const GraphTopology& g) {
  nlohmann::ordered_json doc;
  doc["n"] = g.size();
  auto roles = nlohmann::ordered_json::array();
  for (const auto& t : g.roles()) {
    nlohmann::ordered_json r;
    r["role"] = role_name(t.role);
    if (t.branch >= 0) r["branch"] = t.branch;
    if (t.position >= 0) r["position"] = t.position;
    roles.push_back(std::move(r));
  }
  doc["roles"] = std::move(roles);
  auto edges = nlohmann::ordered_json::array();
  for (const auto& e : g.edges()) edges.push_back({e.source, e.target, e.weight.to_string()});
  doc["edges"] = std::move(edges);
  return doc.dump();
}

GraphTopology graph_from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("graph json: ") + e.what());
  }
  if (!doc.contains("n") || !doc.contains("edges")) {
    throw std::invalid_argument("graph json needs 'n' and 'edges'");
  }
  const auto n = doc.at("n").get<std::size_t>();
  std::vector<Edge> edges;
  for (const auto& e : doc.at("edges")) {
    if (!e.is_array() || e.size() != 3) throw std::invalid_argument("edge must be [src, dst, \"p/q\"]");
    edges.push_back({e[0].get<NodeId>(), e[1].get<NodeId>(), Rational::parse(e[2].get<std::string>())});
  }
  std::vector<NodeTag> roles;
  if (doc.contains("roles")) {
    for (const auto& r : doc.at("roles")) {
      NodeTag t;
      if (r.is_string()) {
        t.role = parse_role(r.get<std::string>());
      } else {
        t.role = parse_role(r.at("role").get<std::string>());
        t.branch = r.value("branch", -1);
        t.position = r.value("position", -1);
      }
      roles.push_back(t);
    }
  }
  return GraphTopology::from_edges(n, std::move(edges), std::move(roles));
}

}  // namespace evograph
