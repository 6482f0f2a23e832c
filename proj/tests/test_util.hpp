#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "evograph/exactchain.hpp"
#include "evograph/topology.hpp"

namespace evograph::testing {

// Upper chi-square quantile at tail probability ~1e-4 (Wilson-Hilferty).
inline double chi2_critical(int df) {
  const double z = 3.719;
  const double a = 2.0 / (9.0 * df);
  return df * std::pow(1.0 - a + z * std::sqrt(a), 3.0);
}

// Pearson statistic of observed counts against expected probabilities;
// cells with zero expected mass must stay empty.
struct ChiSquare {
  double stat = 0.0;
  int df = 0;
  bool impossible_hit = false;
};

inline ChiSquare chi_square(const std::map<Configuration, std::uint64_t>& observed,
                            const std::map<Configuration, double>& expected, std::uint64_t n) {
  ChiSquare out;
  for (const auto& [cell, count] : observed) {
    if (!expected.count(cell) || expected.at(cell) <= 0.0) out.impossible_hit = true;
  }
  for (const auto& [cell, p] : expected) {
    if (p <= 0.0) continue;
    const double e = p * static_cast<double>(n);
    const auto it = observed.find(cell);
    const double o = it == observed.end() ? 0.0 : static_cast<double>(it->second);
    out.stat += (o - e) * (o - e) / e;
    ++out.df;
  }
  out.df = out.df > 1 ? out.df - 1 : 1;
  return out;
}

inline std::vector<GraphTopology> small_suite() {
  std::vector<GraphTopology> out;
  out.push_back(build_family(FamilyKind::Complete, 4));
  out.push_back(build_family(FamilyKind::DirectedCycle, 5));
  out.push_back(build_family(FamilyKind::Star, 6));
  out.push_back(build_superstar({2, 1, 2}));
  // Irregular weighted digraph on 5 nodes.
  out.push_back(GraphTopology::from_edges(
      5, {{0, 1, {1, 2}}, {0, 2, {1, 2}}, {1, 2, {1}}, {2, 3, {2, 3}}, {2, 0, {1, 3}}, {3, 4, {1}},
          {4, 0, {1, 4}}, {4, 1, {3, 4}}}));
  return out;
}

}  // namespace evograph::testing
