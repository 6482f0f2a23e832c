#include "evograph/dynamics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <tuple>

namespace evograph {
namespace {

int bit_length(unsigned __int128 v) {
  int bits = 0;
  while (v != 0) {
    ++bits;
    v >>= 1;
  }
  return bits;
}

// Linear scan over a weighted neighbour list; factor(node) scales each weight.
template <class Factor>
NodeId pick_neighbour(std::span<const NodeId> nodes, std::span<const Rational> weights, Factor factor,
                      Rng& rng) {
  double total = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) total += weights[i].to_double() * factor(nodes[i]);
  double u = rng.uniform() * total;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double w = weights[i].to_double() * factor(nodes[i]);
    if (u < w) return nodes[i];
    u -= w;
  }
  for (std::size_t i = nodes.size(); i-- > 0;) {
    if (weights[i].to_double() * factor(nodes[i]) > 0.0) return nodes[i];
  }
  throw std::logic_error("empty neighbourhood");
}

StepEvent apply(PopulationState& state, Rule rule, NodeId first, NodeId second) {
  const NodeId source = birth_first(rule) ? first : second;
  const NodeId target = birth_first(rule) ? second : first;
  const bool type = state.is_mutant(source);
  const bool changed = state.is_mutant(target) != type;
  if (changed) state.set(target, type);
  return {first, second, changed};
}

void check_step(const GraphTopology& g, const PopulationState& state, const SimConfig& cfg) {
  if (state.size() != g.size()) throw std::invalid_argument("state does not match graph");
  if (state.absorbed()) throw std::logic_error("step on an absorbed state");
  if (state.r() != cfg.r) throw std::invalid_argument("state fitness does not match config");
}

}  // namespace

Placement parse_placement(std::string_view name) {
  if (name == "uniform" || name == "uniform_node") return Placement::UniformNode;
  if (name == "reservoir" || name == "reservoir_only") return Placement::ReservoirOnly;
  if (name == "fecundity" || name == "fecundity_weighted") return Placement::FecundityWeighted;
  throw std::invalid_argument("unknown placement '" + std::string(name) + "'");
}

std::string_view placement_name(Placement p) {
  switch (p) {
    case Placement::UniformNode: return "uniform";
    case Placement::ReservoirOnly: return "reservoir";
    case Placement::FecundityWeighted: return "fecundity";
  }
  return "?";
}

Engine parse_engine(std::string_view name) {
  if (name == "jump") return Engine::Jump;
  if (name == "step") return Engine::Step;
  throw std::invalid_argument("unknown engine '" + std::string(name) + "'");
}

std::string_view engine_name(Engine e) { return e == Engine::Jump ? "jump" : "step"; }

Rule parse_rule(std::string_view name) {
  if (name == "Bd") return Rule::Bd;
  if (name == "bD") return Rule::bD;
  if (name == "dB") return Rule::dB;
  if (name == "Db") return Rule::Db;
  throw std::invalid_argument("unknown rule '" + std::string(name) + "'");
}

std::string_view rule_name(Rule rule) {
  switch (rule) {
    case Rule::Bd: return "Bd";
    case Rule::bD: return "bD";
    case Rule::dB: return "dB";
    case Rule::Db: return "Db";
  }
  return "?";
}

std::string_view result_name(Result r) {
  switch (r) {
    case Result::MutantFixation: return "fixation";
    case Result::MutantExtinction: return "extinction";
    case Result::StepCapReached: return "step_cap";
  }
  return "?";
}

void SimConfig::validate() const {
  if (!(r > 0.0) || !std::isfinite(r)) throw std::invalid_argument("r must be finite and > 0");
}

std::uint64_t SimConfig::step_cap(std::size_t n) const {
  if (max_steps != 0) return max_steps;
  const unsigned __int128 cap = static_cast<unsigned __int128>(1000) * n * n;
  return cap > std::numeric_limits<std::uint64_t>::max() ? std::numeric_limits<std::uint64_t>::max()
                                                        : static_cast<std::uint64_t>(cap);
}

// ---- PopulationState ------------------------------------------------------

PopulationState::PopulationState(std::size_t n, double r)
    : r_(r), mutant_(n, 0), order_(n), slot_(n) {
  if (!(r > 0.0) || !std::isfinite(r)) throw std::invalid_argument("r must be finite and > 0");
  std::iota(order_.begin(), order_.end(), NodeId{0});
  std::iota(slot_.begin(), slot_.end(), 0u);
  // r = odd * 2^exp exactly.
  int e = 0;
  const double mant = std::frexp(r, &e);
  auto odd = static_cast<std::uint64_t>(std::ldexp(mant, 53));
  int exp = e - 53;
  const int zeros = std::countr_zero(odd);
  odd >>= zeros;
  exp += zeros;
  const int room = 126 - bit_length(n == 0 ? 1 : n);
  if (exp >= 0) {
    if (bit_length(odd) + exp > room) throw std::invalid_argument("r too large for exact fitness tracking");
    resident_unit_ = 1;
    mutant_unit_ = static_cast<unsigned __int128>(odd) << exp;
  } else {
    shift_ = -exp;
    if (shift_ + 1 > room || bit_length(odd) > room) {
      throw std::invalid_argument("r too small for exact fitness tracking");
    }
    resident_unit_ = static_cast<unsigned __int128>(1) << shift_;
    mutant_unit_ = odd;
  }
  scaled_fitness_ = recompute_scaled_fitness();
}

void PopulationState::set(NodeId v, bool mutant) {
  if (v >= size()) throw std::out_of_range("node id out of range");
  if (is_mutant(v) == mutant) return;
  const std::uint32_t s = slot_[v];
  // Boundary slot between the classes.
  const std::uint32_t b = mutant ? static_cast<std::uint32_t>(mutant_count_)
                                 : static_cast<std::uint32_t>(mutant_count_ - 1);
  const NodeId other = order_[b];
  std::swap(order_[s], order_[b]);
  slot_[other] = s;
  slot_[v] = b;
  mutant_[v] = mutant ? 1 : 0;
  if (mutant) {
    ++mutant_count_;
    scaled_fitness_ += mutant_unit_ - resident_unit_;
  } else {
    --mutant_count_;
    scaled_fitness_ -= mutant_unit_ - resident_unit_;
  }
}

std::span<const NodeId> PopulationState::members(bool mutant) const {
  if (mutant) return {order_.data(), mutant_count_};
  return {order_.data() + mutant_count_, size() - mutant_count_};
}

unsigned __int128 PopulationState::recompute_scaled_fitness() const {
  unsigned __int128 f = 0;
  for (std::uint8_t m : mutant_) f += m ? mutant_unit_ : resident_unit_;
  return f;
}

double PopulationState::total_fitness() const {
  return std::ldexp(static_cast<double>(scaled_fitness_), -shift_);
}

// ---- Placement ------------------------------------------------------------

InitialPlacement::InitialPlacement(const GraphTopology& g, Placement p) : g_(&g), placement_(p) {
  if (g.size() == 0) throw std::invalid_argument("empty graph");
  if (p == Placement::ReservoirOnly) {
    reservoir_ = g.nodes_with_role(NodeRole::Reservoir);
    if (reservoir_.empty()) throw std::invalid_argument("reservoir placement needs reservoir nodes");
  }
}

NodeId InitialPlacement::draw(Rng& rng) const {
  switch (placement_) {
    case Placement::UniformNode:
      return static_cast<NodeId>(rng.below(g_->size()));
    case Placement::ReservoirOnly:
      return reservoir_[rng.below(reservoir_.size())];
    case Placement::FecundityWeighted: {
      // One birth-death event among residents: reproducer uniform, the
      // offspring lands on a neighbour by edge weight and carries the mutation.
      const auto x = static_cast<NodeId>(rng.below(g_->size()));
      return pick_neighbour(g_->out_neighbours(x), g_->out_weights(x), [](NodeId) { return 1.0; }, rng);
    }
  }
  throw std::logic_error("bad placement");
}

PopulationState place_initial_mutant(const GraphTopology& g, const SimConfig& cfg, Rng& rng) {
  cfg.validate();
  PopulationState state(g.size(), cfg.r);
  state.set(InitialPlacement(g, cfg.placement).draw(rng), true);
  return state;
}

// ---- Stepwise dynamics ----------------------------------------------------

StepEvent step(const GraphTopology& g, PopulationState& state, const SimConfig& cfg, Rng& rng) {
  check_step(g, state, cfg);
  const double r = cfg.r;
  const auto n = static_cast<double>(state.size());
  const auto m = static_cast<double>(state.mutants());
  auto fitness = [&](NodeId v) { return state.is_mutant(v) ? r : 1.0; };
  auto uniform_member = [&](bool mutant) {
    const auto cls = state.members(mutant);
    return cls[rng.below(cls.size())];
  };

  NodeId first = 0, second = 0;
  switch (cfg.rule) {
    case Rule::Bd:
      first = uniform_member(rng.uniform() * state.total_fitness() < m * r);
      second = pick_neighbour(g.out_neighbours(first), g.out_weights(first), [](NodeId) { return 1.0; }, rng);
      break;
    case Rule::bD:
      first = static_cast<NodeId>(rng.below(state.size()));
      second = pick_neighbour(g.out_neighbours(first), g.out_weights(first),
                              [&](NodeId v) { return 1.0 / fitness(v); }, rng);
      break;
    case Rule::dB:
      first = static_cast<NodeId>(rng.below(state.size()));
      second = pick_neighbour(g.in_neighbours(first), g.in_weights(first), fitness, rng);
      break;
    case Rule::Db: {
      const double inverse_total = (n - m) + m / r;
      first = uniform_member(rng.uniform() * inverse_total < m / r);
      second = pick_neighbour(g.in_neighbours(first), g.in_weights(first), [](NodeId) { return 1.0; }, rng);
      break;
    }
  }
  return apply(state, cfg.rule, first, second);
}

StepEvent step_reference(const GraphTopology& g, PopulationState& state, const SimConfig& cfg,
                         Rng& rng) {
  check_step(g, state, cfg);
  const double r = cfg.r;
  std::vector<double> first_weight(state.size());
  for (NodeId v = 0; v < state.size(); ++v) {
    const double f = state.is_mutant(v) ? r : 1.0;
    switch (cfg.rule) {
      case Rule::Bd: first_weight[v] = f; break;
      case Rule::bD:
      case Rule::dB: first_weight[v] = 1.0; break;
      case Rule::Db: first_weight[v] = 1.0 / f; break;
    }
  }
  const double total = std::accumulate(first_weight.begin(), first_weight.end(), 0.0);
  double u = rng.uniform() * total;
  NodeId first = static_cast<NodeId>(state.size() - 1);
  for (NodeId v = 0; v < state.size(); ++v) {
    if (u < first_weight[v]) {
      first = v;
      break;
    }
    u -= first_weight[v];
  }

  NodeId second = 0;
  for (bool done = false; !done;) {
    const bool out = birth_first(cfg.rule);
    const auto nodes = out ? g.out_neighbours(first) : g.in_neighbours(first);
    const auto weights = out ? g.out_weights(first) : g.in_weights(first);
    std::vector<double> w(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const double f = state.is_mutant(nodes[i]) ? r : 1.0;
      w[i] = weights[i].to_double();
      if (cfg.rule == Rule::bD) w[i] /= f;
      if (cfg.rule == Rule::dB) w[i] *= f;
    }
    const double sum = std::accumulate(w.begin(), w.end(), 0.0);
    double v = rng.uniform() * sum;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (v < w[i] || i + 1 == nodes.size()) {
        second = nodes[i];
        done = true;
        break;
      }
      v -= w[i];
    }
    if (nodes.empty()) throw std::logic_error("empty neighbourhood");
  }
  return apply(state, cfg.rule, first, second);
}

// ---- Event engine ---------------------------------------------------------

EventEngine::EventEngine(const GraphTopology& g, double r, Rule rule) : r_(r), rule_(rule), n_(g.size()) {
  if (!(r > 0.0) || !std::isfinite(r)) throw std::invalid_argument("r must be finite and > 0");
  const bool out = birth_first(rule);

  // Group nodes by their sorted (neighbour, weight) list.
  using Key = std::vector<std::tuple<NodeId, std::int64_t, std::int64_t>>;
  std::map<Key, std::uint32_t> index;
  std::vector<const Key*> lists;
  group_of_.resize(n_);
  for (NodeId x = 0; x < n_; ++x) {
    const auto nodes = out ? g.out_neighbours(x) : g.in_neighbours(x);
    const auto weights = out ? g.out_weights(x) : g.in_weights(x);
    Key key;
    key.reserve(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) key.emplace_back(nodes[i], weights[i].num(), weights[i].den());
    std::sort(key.begin(), key.end());
    auto [it, fresh] = index.try_emplace(std::move(key), static_cast<std::uint32_t>(lists.size()));
    if (fresh) lists.push_back(&it->first);
    group_of_[x] = it->second;
  }
  const std::size_t groups = lists.size();

  offset_.assign(groups + 1, 0);
  for (std::size_t k = 0; k < groups; ++k) offset_[k + 1] = offset_[k] + lists[k]->size();
  const std::size_t entries = offset_[groups];
  entry_node_.resize(entries);
  entry_w_.resize(entries);
  slot_.resize(entries);
  at_slot_.resize(entries);
  den_.assign(groups, 1);
  wm_.assign(groups, 0);
  wt_.assign(groups, 0);
  km_.assign(groups, 0);
  uniform_.assign(groups, 1);
  const char* too_fine = "edge weights need a common 64-bit denominator";
  for (std::size_t k = 0; k < groups; ++k) {
    std::int64_t den = 1;
    for (const auto& [v, num, d] : *lists[k]) {
      if (__builtin_mul_overflow(den / std::gcd(den, d), d, &den)) throw std::invalid_argument(too_fine);
    }
    den_[k] = den;
    std::int64_t total = 0;
    std::size_t i = 0;
    for (const auto& [v, num, d] : *lists[k]) {
      const std::size_t e = offset_[k] + i;
      std::int64_t scaled = 0;
      if (__builtin_mul_overflow(num, den / d, &scaled) || __builtin_add_overflow(total, scaled, &total)) {
        throw std::invalid_argument(too_fine);
      }
      entry_node_[e] = v;
      entry_w_[e] = scaled;
      slot_[e] = static_cast<std::uint32_t>(i);
      at_slot_[e] = static_cast<std::uint32_t>(e);
      if (scaled != entry_w_[offset_[k]]) uniform_[k] = 0;
      ++i;
    }
    wt_[k] = total;
  }

  member_offset_.assign(groups + 1, 0);
  for (NodeId x = 0; x < n_; ++x) ++member_offset_[group_of_[x] + 1];
  for (std::size_t k = 0; k < groups; ++k) member_offset_[k + 1] += member_offset_[k];
  members_.resize(n_);
  member_slot_.resize(n_);
  {
    std::vector<std::size_t> fill(member_offset_.begin(), member_offset_.end() - 1);
    for (NodeId x = 0; x < n_; ++x) {
      const std::size_t k = group_of_[x];
      member_slot_[x] = static_cast<std::uint32_t>(fill[k] - member_offset_[k]);
      members_[fill[k]++] = x;
    }
  }
  mcount_.assign(groups, 0);
  canonical_members_ = members_;
  touched_.assign(groups, 0);

  watch_offset_.assign(n_ + 1, 0);
  for (std::size_t e = 0; e < entries; ++e) ++watch_offset_[entry_node_[e] + 1];
  for (std::size_t v = 0; v < n_; ++v) watch_offset_[v + 1] += watch_offset_[v];
  watch_entry_.resize(entries);
  watch_group_.resize(entries);
  {
    std::vector<std::size_t> fill(watch_offset_.begin(), watch_offset_.end() - 1);
    for (std::size_t k = 0; k < groups; ++k) {
      for (std::size_t e = offset_[k]; e < offset_[k + 1]; ++e) {
        const std::size_t w = fill[entry_node_[e]]++;
        watch_entry_[w] = e;
        watch_group_[w] = static_cast<std::uint32_t>(k);
      }
    }
  }

  mutant_.assign(n_, 0);
  mutant_pos_.assign(n_, 0);
  mutant_list_.reserve(n_);
  leaves_ = std::bit_ceil(std::max<std::size_t>(2 * groups, 2));
  tree_.assign(2 * leaves_, 0.0);
  stamp_.assign(leaves_, 0);
}

void EventEngine::touch(std::uint32_t group) {
  if (!touched_[group]) {
    touched_[group] = 1;
    touched_list_.push_back(group);
  }
}

// Flipping mutants back leaves the swap-permuted orderings behind, and the
// draws in next() index into them, so they are restored for every group the
// previous run touched.
void EventEngine::clear() {
  while (!mutant_list_.empty()) flip(mutant_list_.back());
  for (std::uint32_t k : touched_list_) {
    for (std::size_t i = member_offset_[k]; i < member_offset_[k + 1]; ++i) {
      members_[i] = canonical_members_[i];
      member_slot_[members_[i]] = static_cast<std::uint32_t>(i - member_offset_[k]);
    }
    for (std::size_t e = offset_[k]; e < offset_[k + 1]; ++e) {
      at_slot_[e] = static_cast<std::uint32_t>(e);
      slot_[e] = static_cast<std::uint32_t>(e - offset_[k]);
    }
    touched_[k] = 0;
  }
  touched_list_.clear();
}

void EventEngine::reset(NodeId mutant) {
  if (mutant >= n_) throw std::out_of_range("node id out of range");
  clear();
  flip(mutant);
  steps_ = 0;
}

void EventEngine::reset(std::span<const std::uint8_t> mutant) {
  if (mutant.size() != n_) throw std::invalid_argument("configuration does not match graph");
  clear();
  for (NodeId v = 0; v < n_; ++v) {
    if (mutant[v]) flip(v);
  }
  steps_ = 0;
}

void EventEngine::refresh(std::size_t group) {
  const double den = static_cast<double>(den_[group]);
  const double wm = static_cast<double>(wm_[group]) / den;
  const double wt = static_cast<double>(wt_[group]) / den;
  const std::size_t size = member_offset_[group + 1] - member_offset_[group];
  const std::size_t mutants = mcount_[group];
  const std::size_t i = leaves_ + 2 * group;
  tree_[i] = static_cast<double>(size - mutants) * rules::rate<double>(rule_, false, r_, wm, wt);
  tree_[i + 1] = static_cast<double>(mutants) * rules::rate<double>(rule_, true, r_, wm, wt);
  const std::size_t parent = i >> 1;
  if (stamp_[parent] != epoch_) {
    stamp_[parent] = epoch_;
    dirty_.push_back(parent);
  }
}

// Recomputes every ancestor of the leaves touched since the last call, each
// once, level by level.
void EventEngine::propagate() {
  while (!dirty_.empty()) {
    ++epoch_;
    next_dirty_.clear();
    for (std::size_t i : dirty_) {
      tree_[i] = tree_[2 * i] + tree_[2 * i + 1];
      const std::size_t parent = i >> 1;
      if (parent >= 1 && stamp_[parent] != epoch_) {
        stamp_[parent] = epoch_;
        next_dirty_.push_back(parent);
      }
    }
    dirty_.swap(next_dirty_);
  }
  ++epoch_;
}

std::size_t EventEngine::tree_pick(double u) const {
  std::size_t i = 1;
  while (i < leaves_) {
    const double left = tree_[2 * i];
    const bool go_left = (u < left && left > 0.0) || tree_[2 * i + 1] <= 0.0;
    if (go_left) {
      i = 2 * i;
    } else {
      u -= left;
      i = 2 * i + 1;
    }
  }
  return i - leaves_;
}

void EventEngine::flip(NodeId v) {
  const bool now = mutant_[v] == 0;
  mutant_[v] = now ? 1 : 0;
  if (now) {
    mutant_pos_[v] = static_cast<std::uint32_t>(mutant_list_.size());
    mutant_list_.push_back(v);
  } else {
    const NodeId last = mutant_list_.back();
    mutant_list_[mutant_pos_[v]] = last;
    mutant_pos_[last] = mutant_pos_[v];
    mutant_list_.pop_back();
  }

  const std::uint32_t own = group_of_[v];
  touch(own);
  {
    NodeId* block = members_.data() + member_offset_[own];
    const std::uint32_t s = member_slot_[v];
    const std::uint32_t b = now ? mcount_[own] : mcount_[own] - 1;
    const NodeId other = block[b];
    block[b] = v;
    block[s] = other;
    member_slot_[other] = s;
    member_slot_[v] = b;
    mcount_[own] += now ? 1 : -1;
  }
  refresh(own);

  for (std::size_t k = watch_offset_[v]; k < watch_offset_[v + 1]; ++k) {
    const std::size_t e = watch_entry_[k];
    const std::uint32_t x = watch_group_[k];
    touch(x);
    const std::size_t base = offset_[x];
    const std::uint32_t s = slot_[e];
    const std::uint32_t b = now ? km_[x] : km_[x] - 1;
    const std::uint32_t other = at_slot_[base + b];
    at_slot_[base + b] = static_cast<std::uint32_t>(e);
    at_slot_[base + s] = other;
    slot_[other] = s;
    slot_[e] = b;
    if (now) {
      ++km_[x];
      wm_[x] += entry_w_[e];
    } else {
      --km_[x];
      wm_[x] -= entry_w_[e];
    }
    refresh(x);
  }
  propagate();
}

double EventEngine::effective_probability() const {
  const double z = rules::norm<double>(rule_, r_, n_, mutants());
  return std::min(tree_[1] / z, 1.0);
}

bool EventEngine::next(Rng& rng, std::uint64_t budget, FlipEvent& out) {
  const double total = tree_[1];
  if (!(total > 0.0) || budget == 0) {
    steps_ += budget;
    return false;
  }
  const std::uint64_t skip = rng.geometric_failures(effective_probability());
  if (skip >= budget) {
    steps_ += budget;
    return false;
  }
  steps_ += skip + 1;

  const std::size_t leaf = tree_pick(rng.uniform() * total);
  const std::size_t grp = leaf / 2;
  const bool xm = (leaf & 1) != 0;
  const std::size_t first = member_offset_[grp] + (xm ? 0 : mcount_[grp]);
  const std::size_t count = xm ? mcount_[grp] : member_offset_[grp + 1] - member_offset_[grp] - mcount_[grp];
  const NodeId x = members_[first + rng.below(count)];

  const std::size_t base = offset_[grp];
  // Differing neighbours: residents [km, deg) for a mutant x, else [0, km).
  const std::uint32_t lo = xm ? km_[grp] : 0;
  const std::uint32_t hi = xm ? static_cast<std::uint32_t>(offset_[grp + 1] - base) : km_[grp];
  std::uint32_t s = lo;
  if (uniform_[grp]) {
    s = lo + static_cast<std::uint32_t>(rng.below(hi - lo));
  } else {
    const std::int64_t wdiff = xm ? wt_[grp] - wm_[grp] : wm_[grp];
    auto u = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(wdiff)));
    for (; s + 1 < hi; ++s) {
      u -= entry_w_[at_slot_[base + s]];
      if (u < 0) break;
    }
  }
  const NodeId y = entry_node_[at_slot_[base + s]];
  const NodeId source = birth_first(rule_) ? x : y;
  const NodeId target = birth_first(rule_) ? y : x;
  flip(target);
  out = {source, target, mutant_[target] != 0, steps_};
  return true;
}

// ---- Trajectories ---------------------------------------------------------

SimulationOutcome run_to_absorption(const GraphTopology& g, const SimConfig& cfg, Rng& rng) {
  cfg.validate();
  const std::uint64_t cap = cfg.step_cap(g.size());
  SimulationOutcome out;
  out.seed = rng.seed();
  out.initial = InitialPlacement(g, cfg.placement).draw(rng);

  auto finish = [&](std::size_t mutants, std::uint64_t steps) {
    out.steps = steps;
    if (mutants == 0) {
      out.result = Result::MutantExtinction;
    } else if (mutants == g.size()) {
      out.result = Result::MutantFixation;
    } else {
      out.result = Result::StepCapReached;
      out.steps = cap;
    }
    return out;
  };

  if (cfg.engine == Engine::Jump) {
    EventEngine engine(g, cfg.r, cfg.rule);
    engine.reset(out.initial);
    FlipEvent ev{};
    while (!engine.absorbed()) {
      if (!engine.next(rng, cap - engine.steps(), ev)) break;
    }
    return finish(engine.mutants(), engine.steps());
  }

  PopulationState state(g.size(), cfg.r);
  state.set(out.initial, true);
  std::uint64_t steps = 0;
  while (!state.absorbed() && steps < cap) {
    step(g, state, cfg, rng);
    ++steps;
  }
  return finish(state.mutants(), steps);
}

SimulationOutcome run_to_absorption(const GraphTopology& g, const SimConfig& cfg) {
  Rng rng(cfg.seed);
  return run_to_absorption(g, cfg, rng);
}

}  // namespace evograph
