#include "evograph/rootchain.hpp"

#include <stdexcept>

namespace evograph::rootchain {
namespace {

void check(int B, const BigRational& r, int l) {
  if (B < 2) throw std::invalid_argument("root chain needs B >= 2");
  if (sgn(r) <= 0) throw std::invalid_argument("root chain needs r > 0");
  if (l < 0) throw std::invalid_argument("root chain needs l >= 0");
}

}  // namespace

RootChainSolution solve_root_chain(int B, const BigRational& r, int l) {
  check(B, r, l);
  RootChainSolution sol;
  sol.branches = B;
  sol.length = l;
  sol.fitness = r;
  const BigRational b(B);
  const BigRational one(1);
  // Inverse of [[B+r, 1-B], [-r, r+1]]: det = B + 2r + r^2.
  const BigRational det = b + 2 * r + r * r;
  sol.p_up.reserve(l + 1);
  sol.p_down.reserve(l + 1);
  sol.p_up.emplace_back(r / (b + r));
  sol.p_down.emplace_back(0);
  for (int i = 1; i <= l; ++i) {
    const BigRational up_in = r + sol.p_up.back();
    const BigRational down_in = sol.p_down.back();
    sol.p_up.emplace_back(((r + one) * up_in + (b - one) * down_in) / det);
    sol.p_down.emplace_back((r * up_in + (r + b) * down_in) / det);
  }
  return sol;
}

RootChainSolution solve_root_chain(int B, double r, int l) {
  return solve_root_chain(B, exact_rational(r), l);
}

RootChainSolution solve_root_chain_competing(int B, const BigRational& r, int l, int delta) {
  check(B, r, l);
  if (delta < 0 || delta >= B) throw std::invalid_argument("competing branches need 0 <= delta < B");
  RootChainSolution sol;
  sol.branches = B;
  sol.length = l;
  sol.competing = delta;
  sol.fitness = r;
  const BigRational b(B);
  const BigRational d(delta);
  const BigRational one(1);
  const BigRational crowd = b + d * (r - one);  // B + delta(r-1)
  const BigRational det = crowd + 2 * r + r * r;
  const BigRational payoff = r * (b - d) / b;
  sol.p_up.emplace_back(r / (b + r));
  sol.p_down.emplace_back(0);
  for (int i = 1; i <= l; ++i) {
    const BigRational up_in = payoff + sol.p_up.back();
    const BigRational down_in = sol.p_down.back();
    sol.p_up.emplace_back(((r + one) * up_in + (crowd - one) * down_in) / det);
    sol.p_down.emplace_back((r * up_in + (r + crowd) * down_in) / det);
  }
  return sol;
}

}  // namespace evograph::rootchain
