#pragma once

// A train of length l sits at the base of its stem and competes with the
// other B-1 branches for the root. p_up[i] / p_down[i] is the probability
// that a train of current length i eventually places a new reservoir mutant
// given the root currently holds a mutant / a resident.

#include <vector>

#include "evograph/rational.hpp"

namespace evograph::rootchain {

struct RootChainSolution {
  int branches = 0;         // B
  int length = 0;           // l
  int competing = 0;        // delta: other mutant branches (0 for the main solver)
  BigRational fitness;      // r
  std::vector<BigRational> p_up;    // i = 0..l
  std::vector<BigRational> p_down;  // i = 0..l
};

// Exact iteration of the 2x2 recursion from (r/(B+r), 0). Requires B >= 2,
// r > 0, l >= 0 (std::invalid_argument).
RootChainSolution solve_root_chain(int B, const BigRational& r, int l);
RootChainSolution solve_root_chain(int B, double r, int l);

// Worst case for the lower bound: delta other branches keep a mutant at the
// base of their stems permanently, and success only counts when it lands in
// one of the B - delta mutant-free branches. Requires 0 <= delta < B.
RootChainSolution solve_root_chain_competing(int B, const BigRational& r, int l, int delta);

// (1+r)/((B+2r+1)(B+r)) + (H-1)(r+1)/(2B+4r+2)
template <class S>
S epsilon4_plus(const S& B, const S& r, const S& H) {
  const S one(1), two(2), four(4);
  return S((one + r) / ((B + two * r + one) * (B + r))) +
         S((H - one) * (r + one) / (two * B + four * r + two));
}

// (2 delta r + r^2 + 3r + H(r^2 + r)) / (2B)
template <class S>
S epsilon4_minus(const S& B, const S& r, const S& H, const S& delta) {
  const S two(2), three(3);
  return S((two * delta * r + r * r + three * r + H * (r * r + r)) / (two * B));
}

inline double epsilon4_plus(double B, double r, double H) { return epsilon4_plus<double>(B, r, H); }
inline double epsilon4_minus(double B, double r, double H, double delta) {
  return epsilon4_minus<double>(B, r, H, delta);
}

}  // namespace evograph::rootchain
