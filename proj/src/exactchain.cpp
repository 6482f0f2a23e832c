#include "evograph/exactchain.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace evograph {
namespace {

constexpr double kResidualGate = 1e-12;

// Off-diagonal transitions out of `state`, from the shared per-node rates.
template <class S, class ToScalar>
std::vector<std::pair<Configuration, S>> moves(const GraphTopology& g, Configuration state, const S& r,
                                               Rule rule, ToScalar to_scalar) {
  const std::size_t n = g.size();
  auto mutant = [&](NodeId v) { return ((state >> v) & 1u) != 0; };
  std::size_t m = 0;
  for (NodeId v = 0; v < n; ++v) m += mutant(v);
  const S z = rules::norm<S>(rule, r, n, m);
  const bool out = birth_first(rule);

  std::vector<std::pair<Configuration, S>> row;
  for (NodeId x = 0; x < n; ++x) {
    const auto nodes = out ? g.out_neighbours(x) : g.in_neighbours(x);
    const auto weights = out ? g.out_weights(x) : g.in_weights(x);
    S wm(0), wt(0);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const S w = to_scalar(weights[i]);
      wt += w;
      if (mutant(nodes[i])) wm += w;
    }
    const bool xm = mutant(x);
    const S rate = rules::rate<S>(rule, xm, r, wm, wt);
    if (rate == S(0)) continue;
    const S wdiff = xm ? S(wt - wm) : wm;
    const S scale = rate / (z * wdiff);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (mutant(nodes[i]) == xm) continue;
      const NodeId target = out ? nodes[i] : x;
      const Configuration next = state ^ (Configuration{1} << target);
      const S p = scale * to_scalar(weights[i]);
      auto it = std::find_if(row.begin(), row.end(), [&](const auto& t) { return t.first == next; });
      if (it == row.end()) {
        row.emplace_back(next, p);
      } else {
        it->second += p;
      }
    }
  }
  return row;
}

}  // namespace

std::vector<Transition> exact_transition_row(const GraphTopology& g, Configuration state,
                                             const BigRational& r, Rule rule) {
  const std::size_t n = g.size();
  if (n == 0 || n > 32) throw std::invalid_argument("transition rows need 1 <= N <= 32");
  const Configuration full = n == 32 ? ~Configuration{0} : (Configuration{1} << n) - 1;
  if (state > full) throw std::invalid_argument("configuration out of range");
  if (state == 0 || state == full) throw std::invalid_argument("absorbing state has no transition row");
  if (sgn(r) <= 0) throw std::invalid_argument("r must be > 0");

  auto row = moves<BigRational>(g, state, r, rule, [](const Rational& w) { return to_big(w); });
  BigRational stay(1);
  std::vector<Transition> out;
  out.reserve(row.size() + 1);
  for (auto& [next, p] : row) {
    p.canonicalize();
    stay -= p;
    out.push_back({next, p});
  }
  if (sgn(stay) != 0) out.push_back({state, stay});
  return out;
}

ExactFixation exact_fixation(const GraphTopology& g, double r, Rule rule, std::size_t cap) {
  const std::size_t n = g.size();
  if (!(r > 0.0) || !std::isfinite(r)) throw std::invalid_argument("r must be finite and > 0");
  if (n < 2) throw std::invalid_argument("exact solver needs N >= 2");
  if (n > std::min<std::size_t>(cap, 24)) {
    throw std::invalid_argument("N = " + std::to_string(n) + " exceeds the exact solver cap of " +
                                std::to_string(std::min<std::size_t>(cap, 24)));
  }
  ExactFixation out;
  out.strongly_connected = is_strongly_connected(g);
  if (!out.strongly_connected) out.warning = "graph is not strongly connected";

  const Configuration full = (Configuration{1} << n) - 1;
  const std::size_t unknowns = full - 1;  // states 1..full-1 map to 0..full-2
  using SpMat = Eigen::SparseMatrix<double>;
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(unknowns * (n + 1));
  Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(unknowns));
  std::size_t stuck = 0;

  for (Configuration s = 1; s < full; ++s) {
    const auto row = moves<double>(g, s, r, rule, [](const Rational& w) { return w.to_double(); });
    const auto i = static_cast<Eigen::Index>(s - 1);
    double exit = 0.0;
    for (const auto& t : row) exit += t.second;
    if (!(exit > 0.0)) {
      // No way out (only possible without strong connectivity): never fixes.
      ++stuck;
      triplets.emplace_back(i, i, 1.0);
      continue;
    }
    // Embedded jump chain: rows scaled by the exit probability.
    triplets.emplace_back(i, i, 1.0);
    for (const auto& [next, p] : row) {
      if (next == full) {
        b[i] += p / exit;
      } else if (next != 0) {
        triplets.emplace_back(i, static_cast<Eigen::Index>(next - 1), -p / exit);
      }
    }
  }
  if (stuck != 0) out.warning += "; " + std::to_string(stuck) + " configurations cannot change";

  SpMat a(static_cast<Eigen::Index>(unknowns), static_cast<Eigen::Index>(unknowns));
  a.setFromTriplets(triplets.begin(), triplets.end());
  a.makeCompressed();

  Eigen::VectorXd x;
  auto residual = [&](const Eigen::VectorXd& v) { return (b - a * v).lpNorm<Eigen::Infinity>(); };
  auto direct = [&] {
    Eigen::SparseLU<SpMat> lu;
    lu.compute(a);
    if (lu.info() != Eigen::Success) throw std::runtime_error("exact solver: singular absorption system");
    x = lu.solve(b);
    for (int k = 0; k < 3 && residual(x) >= kResidualGate; ++k) x += lu.solve(b - a * x);
  };
  if (n <= 12) {
    direct();
  } else {
    // Rows are diagonally dominant, so a Jacobi-preconditioned Krylov solve
    // converges fast; LU stays as the fallback.
    Eigen::BiCGSTAB<SpMat, Eigen::DiagonalPreconditioner<double>> solver;
    solver.setTolerance(1e-14);
    solver.setMaxIterations(20000);
    solver.compute(a);
    x = solver.solve(b);
    for (int k = 0; k < 5 && residual(x) >= kResidualGate; ++k) x += solver.solve(b - a * x);
    if (!(residual(x) < kResidualGate)) direct();
  }
  out.residual = residual(x);
  if (!(out.residual < kResidualGate)) {
    throw std::runtime_error("exact solver: residual " + std::to_string(out.residual) + " above 1e-12");
  }

  out.per_node.resize(n);
  double sum = 0.0;
  for (NodeId v = 0; v < n; ++v) {
    out.per_node[v] = x[static_cast<Eigen::Index>((Configuration{1} << v) - 1)];
    sum += out.per_node[v];
  }
  out.average = sum / static_cast<double>(n);
  return out;
}

}  // namespace evograph
