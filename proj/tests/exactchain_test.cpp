#include <doctest.h>

#include <map>

#include "evograph/closedform.hpp"
#include "evograph/exactchain.hpp"
#include "test_util.hpp"

using namespace evograph;

namespace {

// One step enumerated over every (first, second) pair straight from the rule
// definitions, with no shared rate algebra.
std::map<Configuration, BigRational> brute_row(const GraphTopology& g, Configuration s, const BigRational& r,
                                               Rule rule) {
  const auto n = static_cast<NodeId>(g.size());
  auto fit = [&](NodeId v) { return (s >> v) & 1u ? r : BigRational(1); };
  auto with = [&](NodeId v, bool mutant) {
    return mutant ? (s | (Configuration{1} << v)) : (s & ~(Configuration{1} << v));
  };
  std::map<Configuration, BigRational> row;
  BigRational total_fit(0), total_inv(0);
  for (NodeId v = 0; v < n; ++v) {
    total_fit += fit(v);
    total_inv += 1 / fit(v);
  }
  for (NodeId x = 0; x < n; ++x) {
    const bool x_mut = (s >> x) & 1u;
    if (rule == Rule::Bd || rule == Rule::bD) {
      const auto ys = g.out_neighbours(x);
      const auto ws = g.out_weights(x);
      const BigRational px = rule == Rule::Bd ? fit(x) / total_fit : BigRational(1, n);
      BigRational z(0);
      for (std::size_t i = 0; i < ys.size(); ++i) {
        z += rule == Rule::Bd ? to_big(ws[i]) : to_big(ws[i]) / fit(ys[i]);
      }
      for (std::size_t i = 0; i < ys.size(); ++i) {
        const BigRational py = (rule == Rule::Bd ? to_big(ws[i]) : to_big(ws[i]) / fit(ys[i])) / z;
        row[with(ys[i], x_mut)] += px * py;
      }
    } else {
      const auto ys = g.in_neighbours(x);
      const auto ws = g.in_weights(x);
      const BigRational px = rule == Rule::Db ? (1 / fit(x)) / total_inv : BigRational(1, n);
      BigRational z(0);
      for (std::size_t i = 0; i < ys.size(); ++i) {
        z += rule == Rule::dB ? to_big(ws[i]) * fit(ys[i]) : to_big(ws[i]);
      }
      if (ys.empty()) {
        row[s] += px;
        continue;
      }
      for (std::size_t i = 0; i < ys.size(); ++i) {
        const BigRational py = (rule == Rule::dB ? to_big(ws[i]) * fit(ys[i]) : to_big(ws[i])) / z;
        row[with(x, (s >> ys[i]) & 1u)] += px * py;
      }
    }
  }
  return row;
}

constexpr Rule kRules[] = {Rule::Bd, Rule::bD, Rule::dB, Rule::Db};

}  // namespace

TEST_SUITE("exactchain") {
  TEST_CASE("transition rows match a brute-force enumeration") {
    for (const auto& g : testing::small_suite()) {
      const Configuration full = (Configuration{1} << g.size()) - 1;
      for (Rule rule : kRules) {
        for (const BigRational& r : {BigRational(1, 2), BigRational(1), BigRational(2), BigRational(7, 3)}) {
          for (Configuration s = 1; s < full; s += (g.size() > 6 ? 7 : 1)) {
            const auto row = exact_transition_row(g, s, r, rule);
            BigRational sum(0);
            std::map<Configuration, BigRational> got;
            for (const auto& t : row) {
              got[t.next] += t.probability;
              sum += t.probability;
            }
            CHECK(sum == 1);
            auto want = brute_row(g, s, r, rule);
            std::erase_if(want, [](const auto& kv) { return kv.second == 0; });
            std::erase_if(got, [](const auto& kv) { return kv.second == 0; });
            CHECK(got == want);
          }
        }
      }
    }
  }

  TEST_CASE("complete graph and cycle follow the unstructured formula") {
    const auto k4 = build_family(FamilyKind::Complete, 4);
    const auto sol = exact_fixation(k4, 2.0, Rule::Bd);
    CHECK(sol.average == doctest::Approx(8.0 / 15.0).epsilon(1e-13));
    for (double p : sol.per_node) CHECK(p == doctest::Approx(8.0 / 15.0).epsilon(1e-13));
    CHECK(sol.residual < 1e-12);
    CHECK(sol.strongly_connected);
    CHECK(sol.warning.empty());

    const auto c5 = build_family(FamilyKind::DirectedCycle, 5);
    CHECK(exact_fixation(c5, 1.0, Rule::Bd).average == doctest::Approx(0.2).epsilon(1e-13));
    CHECK(exact_fixation(c5, 3.0, Rule::Bd).average ==
          doctest::Approx(closedform::moran_fixation(3.0, 5)).epsilon(1e-13));
  }

  TEST_CASE("large chain uses the iterative solver and keeps the gate") {
    const auto k14 = build_family(FamilyKind::Complete, 14);
    const auto sol = exact_fixation(k14, 1.5, Rule::Bd);
    CHECK(sol.residual < 1e-12);
    CHECK(sol.average == doctest::Approx(closedform::moran_fixation(1.5, 14)).epsilon(1e-10));
  }

  TEST_CASE("star suppresses under dB and amplifies under Bd") {
    const auto star = build_family(FamilyKind::Star, 8);
    const double moran = closedform::moran_fixation(2.0, 8);
    CHECK(exact_fixation(star, 2.0, Rule::Bd).average > moran);
    CHECK(exact_fixation(star, 2.0, Rule::dB).average < moran);
  }

  TEST_CASE("graphs that are not strongly connected get a warning") {
    // 2 only feeds 0; nothing feeds 2, so 2 can never be replaced.
    const auto g = GraphTopology::from_edges(3, {{0, 1, {1}}, {1, 0, {1}}, {2, 0, {1}}});
    const auto sol = exact_fixation(g, 2.0, Rule::Bd);
    CHECK(!sol.strongly_connected);
    CHECK(!sol.warning.empty());
    CHECK(sol.per_node[0] == 0.0);
    CHECK(sol.per_node[2] == doctest::Approx(1.0));
  }

  TEST_CASE("argument errors") {
    const auto k4 = build_family(FamilyKind::Complete, 4);
    CHECK_THROWS_AS(exact_fixation(build_family(FamilyKind::Complete, 17), 2.0, Rule::Bd), std::invalid_argument);
    CHECK_THROWS_AS(exact_fixation(build_family(FamilyKind::Complete, 25), 2.0, Rule::Bd, 30),
                    std::invalid_argument);
    CHECK_THROWS_AS(exact_transition_row(k4, 0, BigRational(2), Rule::Bd), std::invalid_argument);
    CHECK_THROWS_AS(exact_transition_row(k4, 15, BigRational(2), Rule::Bd), std::invalid_argument);
  }
}
