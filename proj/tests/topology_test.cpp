#include <doctest.h>

#include <numeric>

#include "evograph/topology.hpp"

using namespace evograph;

namespace {

Rational out_sum(const GraphTopology& g, NodeId v) {
  Rational s(0);
  for (const Rational& w : g.out_weights(v)) s += w;
  return s;
}

}  // namespace

TEST_SUITE("topology") {
  TEST_CASE("superstar sizes and layout") {
    CHECK(build_superstar({5, 5, 4}).size() == 46);
    const auto g = build_superstar({3, 2, 3});
    CHECK(g.size() == 16);
    CHECK(g.out_neighbours(0).size() == 6);
    for (const Rational& w : g.out_weights(0)) CHECK(w == Rational(1, 6));
    CHECK(g.tag(0).role == NodeRole::Root);
    // Reservoir node j of branch b is 1 + b*L + j and feeds stem position 1.
    const NodeId res = 1 + 1 * 2 + 1;
    CHECK(g.tag(res).role == NodeRole::Reservoir);
    CHECK(g.tag(res).branch == 1);
    const NodeId stem1 = 1 + 3 * 2 + 1 * 3;
    REQUIRE(g.out_neighbours(res).size() == 1);
    CHECK(g.out_neighbours(res)[0] == stem1);
    CHECK(g.tag(stem1) == NodeTag{NodeRole::Stem, 1, 1});
    CHECK(g.out_neighbours(stem1)[0] == stem1 + 1);
    CHECK(g.out_neighbours(stem1 + 2)[0] == 0);
    CHECK(g.in_neighbours(0).size() == 3);
    CHECK(g.superstar()->structural_k() == 5);
  }

  TEST_CASE("smallest superstar") {
    const auto g = build_superstar({1, 1, 2});
    CHECK(g.size() == 4);
    REQUIRE(g.out_weights(0).size() == 1);
    CHECK(g.out_weights(0)[0] == Rational(1));
  }

  TEST_CASE("rejects specs outside the analysed range") {
    CHECK_THROWS_AS(build_superstar({1, 1, 1}), std::invalid_argument);
    CHECK_THROWS_AS(build_superstar({0, 1, 2}), std::invalid_argument);
    CHECK_THROWS_AS(build_superstar({1, 0, 2}), std::invalid_argument);
    CHECK_THROWS_AS(build_family(FamilyKind::Complete, 1), std::invalid_argument);
    CHECK_THROWS_AS(parse_family("wheel"), std::invalid_argument);
  }

  TEST_CASE("families") {
    const auto k4 = build_family(FamilyKind::Complete, 4);
    for (NodeId v = 0; v < 4; ++v) {
      CHECK(k4.out_neighbours(v).size() == 3);
      for (const Rational& w : k4.out_weights(v)) CHECK(w == Rational(1, 3));
    }
    const auto c5 = build_family(FamilyKind::DirectedCycle, 5);
    CHECK(c5.edge_count() == 5);
    for (NodeId v = 0; v < 5; ++v) CHECK(c5.out_neighbours(v)[0] == (v + 1) % 5);
    const auto star = build_family(FamilyKind::Star, 101);
    CHECK(star.out_neighbours(0).size() == 100);
    for (const Rational& w : star.out_weights(0)) CHECK(w == Rational(1, 100));
    for (NodeId v = 1; v < 101; ++v) CHECK(star.out_weights(v)[0] == Rational(1));
    CHECK(parse_family("cycle") == FamilyKind::DirectedCycle);
    CHECK(parse_family("directed_cycle") == FamilyKind::DirectedCycle);
  }

  TEST_CASE("builder invariants: unit out-weight, no self-loops, strongly connected") {
    std::vector<GraphTopology> graphs;
    graphs.push_back(build_superstar({5, 5, 4}));
    graphs.push_back(build_superstar({2, 3, 2}));
    graphs.push_back(build_family(FamilyKind::Complete, 6));
    graphs.push_back(build_family(FamilyKind::DirectedCycle, 7));
    graphs.push_back(build_family(FamilyKind::Star, 9));
    for (const auto& g : graphs) {
      CHECK(is_strongly_connected(g));
      for (NodeId v = 0; v < g.size(); ++v) {
        CHECK(out_sum(g, v) == Rational(1));
        for (NodeId t : g.out_neighbours(v)) CHECK(t != v);
      }
    }
  }

  TEST_CASE("circulations") {
    CHECK(is_circulation(build_family(FamilyKind::Complete, 4)));
    CHECK(is_circulation(build_family(FamilyKind::DirectedCycle, 5)));
    CHECK_FALSE(is_circulation(build_superstar({5, 5, 4})));
    CHECK_FALSE(is_circulation(build_family(FamilyKind::Star, 5)));
  }

  TEST_CASE("raw graphs are validated") {
    CHECK_THROWS_AS(GraphTopology::from_edges(2, {{0, 1, Rational(1, 2)}, {1, 0, Rational(1)}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(GraphTopology::from_edges(2, {{0, 2, Rational(1)}, {1, 0, Rational(1)}}),
                    std::invalid_argument);
    const auto g = GraphTopology::from_edges(2, {{0, 1, Rational(1)}, {1, 1, Rational(1)}});
    CHECK_FALSE(is_strongly_connected(g));
  }

  TEST_CASE("json round trip keeps exact weights and roles") {
    const auto g = build_superstar({2, 3, 2});
    const auto text = graph_to_json(g);
    CHECK(text.find("\"1/6\"") != std::string::npos);
    const auto h = graph_from_json(text);
    CHECK(h.size() == g.size());
    CHECK(graph_to_json(h) == text);
    for (NodeId v = 0; v < g.size(); ++v) CHECK(h.tag(v) == g.tag(v));
    CHECK_THROWS_AS(graph_from_json("{\"n\": 2}"), std::invalid_argument);
  }
}
