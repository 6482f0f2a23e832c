#pragma once

// Update rules and the per-node event rates they induce. The formulas are
// templated on the scalar so the event-driven simulator (double) and the
// exact absorbing-chain oracle (BigRational) evaluate the same expressions.
//
// Each rule picks a first node x, then a neighbour y from x's list: the
// out-neighbours for birth-first rules (x reproduces into y), the
// in-neighbours for death-first rules (x dies and y's offspring replaces it).
// A step changes the configuration only when x and y differ in type. Given
// the list weight to mutants wm and the list total wt,
//
//   rate(x) * norm = probability that a step picks x and then a differing y,
//
// and the differing y is then always drawn proportional to edge weight.

#include <cstddef>
#include <string_view>

namespace evograph {

enum class Rule { Bd, bD, dB, Db };

constexpr bool birth_first(Rule rule) { return rule == Rule::Bd || rule == Rule::bD; }

Rule parse_rule(std::string_view name);  // "Bd" | "bD" | "dB" | "Db"; std::invalid_argument otherwise
std::string_view rule_name(Rule rule);

namespace rules {

// Bd: x proportional to fitness, y proportional to w (out-weights sum to 1,
//     so wm and wt must be absolute here).
// bD: x uniform, y proportional to w / f_y.
// dB: x uniform, y proportional to f_y * w.
// Db: x proportional to 1 / f_x, y proportional to w.
template <class S>
S rate(Rule rule, bool x_mutant, const S& r, const S& wm, const S& wt) {
  const S zero(0);
  if (wt == zero) return zero;
  const S wr = wt - wm;
  switch (rule) {
    case Rule::Bd:
      return x_mutant ? S(r * wr) : S(wm);
    case Rule::bD: {
      const S wm_scaled = wm / r;
      return S((x_mutant ? wr : wm_scaled) / (wm_scaled + wr));
    }
    case Rule::dB: {
      const S wm_scaled = r * wm;
      return S((x_mutant ? wr : wm_scaled) / (wm_scaled + wr));
    }
    case Rule::Db:
      return x_mutant ? S(wr / (r * wt)) : S(wm / wt);
  }
  return zero;
}

// Normaliser for m mutants among n nodes: total fitness for Bd, n for the
// uniform first stages, total inverse fitness for Db.
template <class S>
S norm(Rule rule, const S& r, std::size_t n, std::size_t m) {
  const S residents(static_cast<long>(n - m)), mutants(static_cast<long>(m));
  switch (rule) {
    case Rule::Bd:
      return S(residents + mutants * r);
    case Rule::bD:
    case Rule::dB:
      return S(static_cast<long>(n));
    case Rule::Db:
      return S(residents + mutants / r);
  }
  return S(0);
}

}  // namespace rules
}  // namespace evograph
