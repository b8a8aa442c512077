#include <doctest.h>

#include <algorithm>
#include <optional>
#include <random>
#include <vector>

#include "triside/errors.hpp"
#include "triside/flow.hpp"

using namespace triside;

namespace {

// Reference answer by brute force: try every integer flow vector within the
// arc capacities, keep the cheapest one that is conserved and ships exactly
// `supply` units out of the source.
std::optional<Rat> cheapest_flow_by_enumeration(const FlowNetwork& network,
                                                int supply) {
  const auto& arcs = network.arcs();
  std::vector<int> flow(arcs.size(), 0);
  std::optional<Rat> best;

  auto feasible = [&]() {
    std::vector<int> net(static_cast<size_t>(network.node_count()), 0);
    for (size_t a = 0; a < arcs.size(); ++a) {
      net[static_cast<size_t>(arcs[a].from)] += flow[a];
      net[static_cast<size_t>(arcs[a].to)] -= flow[a];
    }
    for (int node = 0; node < network.node_count(); ++node) {
      int balance = net[static_cast<size_t>(node)];
      if (node == network.source()) {
        if (balance != supply) return false;
      } else if (node == network.sink()) {
        if (balance != -supply) return false;
      } else if (balance != 0) {
        return false;
      }
    }
    return true;
  };

  auto walk = [&](auto&& self, size_t a) -> void {
    if (a == arcs.size()) {
      if (!feasible()) return;
      Rat cost = 0;
      for (size_t i = 0; i < arcs.size(); ++i) cost += arcs[i].cost * flow[i];
      if (!best || cost < *best) best = cost;
      return;
    }
    for (int units = 0; units <= arcs[a].capacity; ++units) {
      flow[a] = units;
      self(self, a + 1);
    }
    flow[a] = 0;
  };
  walk(walk, 0);
  return best;
}

void check_result_consistency(const FlowNetwork& network, int supply,
                              const FlowResult& result) {
  REQUIRE(result.arc_flow.size() == network.arcs().size());
  Rat cost = 0;
  std::vector<int> net(static_cast<size_t>(network.node_count()), 0);
  for (size_t a = 0; a < network.arcs().size(); ++a) {
    const auto& arc = network.arcs()[a];
    CHECK(result.arc_flow[a] >= 0);
    CHECK(result.arc_flow[a] <= arc.capacity);
    cost += arc.cost * result.arc_flow[a];
    net[static_cast<size_t>(arc.from)] += result.arc_flow[a];
    net[static_cast<size_t>(arc.to)] -= result.arc_flow[a];
  }
  CHECK(cost == result.cost);
  for (int node = 0; node < network.node_count(); ++node) {
    int expected = node == network.source() ? supply
                   : node == network.sink() ? -supply
                                            : 0;
    CHECK(net[static_cast<size_t>(node)] == expected);
  }
}

}  // namespace

TEST_CASE("min-cost flow picks cheaper paths first") {
  FlowNetwork network(4, 0, 3);
  network.add_arc(0, 1, 2, Rat(1));
  network.add_arc(1, 3, 2, Rat(1));
  network.add_arc(0, 2, 1, Rat(0));
  network.add_arc(2, 3, 1, Rat(0));

  auto one = min_cost_flow(network, 1);
  REQUIRE(one.has_value());
  CHECK(one->cost == 0);
  check_result_consistency(network, 1, *one);

  auto two = min_cost_flow(network, 2);
  REQUIRE(two.has_value());
  CHECK(two->cost == 2);

  auto three = min_cost_flow(network, 3);
  REQUIRE(three.has_value());
  CHECK(three->cost == 4);
  check_result_consistency(network, 3, *three);

  CHECK(!min_cost_flow(network, 4).has_value());
  auto zero = min_cost_flow(network, 0);
  REQUIRE(zero.has_value());
  CHECK(zero->cost == 0);
}

TEST_CASE("min-cost flow handles negative arc costs and exact fractions") {
  FlowNetwork network(3, 0, 2);
  network.add_arc(0, 1, 1, Rat(0));
  network.add_arc(1, 2, 1, Rat(-3));
  auto result = min_cost_flow(network, 1);
  REQUIRE(result.has_value());
  CHECK(result->cost == -3);

  FlowNetwork fractions(4, 0, 3);
  fractions.add_arc(0, 1, 1, Rat(0));
  fractions.add_arc(0, 2, 1, Rat(0));
  fractions.add_arc(1, 3, 1, Rat(1, 3));
  fractions.add_arc(2, 3, 1, Rat(1, 2));
  auto pick = min_cost_flow(fractions, 1);
  REQUIRE(pick.has_value());
  CHECK(pick->cost == Rat(1, 3));
  auto both = min_cost_flow(fractions, 2);
  REQUIRE(both.has_value());
  CHECK(both->cost == Rat(5, 6));
}

TEST_CASE("min-cost flow agrees with enumeration on random acyclic networks") {
  std::mt19937_64 rng(20240817);
  for (int round = 0; round < 60; ++round) {
    int nodes = 4 + static_cast<int>(rng() % 3);  // 4..6, source 0, sink last
    FlowNetwork network(nodes, 0, nodes - 1);
    // Arcs only run from lower to higher node index, so the network is a DAG
    // and negative costs are safe.
    std::vector<std::pair<int, int>> slots;
    for (int from = 0; from < nodes - 1; ++from)
      for (int to = from + 1; to < nodes; ++to)
        if (from != nodes - 1 && to != 0) slots.emplace_back(from, to);
    std::shuffle(slots.begin(), slots.end(), rng);
    size_t arc_count = std::min(slots.size(), size_t{8});
    for (size_t i = 0; i < arc_count; ++i) {
      int capacity = 1 + static_cast<int>(rng() % 2);
      // Divide instead of using the two-argument constructor so the fraction
      // comes out reduced.
      long numerator = static_cast<long>(rng() % 9) - 3;
      Rat cost = Rat(numerator) / (1 + static_cast<long>(rng() % 2));
      network.add_arc(slots[i].first, slots[i].second, capacity, cost);
    }
    for (int supply = 0; supply <= 3; ++supply) {
      CAPTURE(round);
      CAPTURE(supply);
      auto expected = cheapest_flow_by_enumeration(network, supply);
      auto actual = min_cost_flow(network, supply);
      REQUIRE(actual.has_value() == expected.has_value());
      if (actual) {
        CHECK(actual->cost == *expected);
        check_result_consistency(network, supply, *actual);
      }
    }
  }
}

TEST_CASE("flow network validates its shape") {
  CHECK_THROWS_AS(FlowNetwork(1, 0, 0), InputError);
  CHECK_THROWS_AS(FlowNetwork(3, 0, 3), InputError);
  CHECK_THROWS_AS(FlowNetwork(3, 1, 1), InputError);

  FlowNetwork network(3, 0, 2);
  CHECK_THROWS_AS(network.add_arc(1, 1, 1, Rat(0)), InputError);
  CHECK_THROWS_AS(network.add_arc(1, 0, 1, Rat(0)), InputError);
  CHECK_THROWS_AS(network.add_arc(2, 1, 1, Rat(0)), InputError);
  CHECK_THROWS_AS(network.add_arc(0, 3, 1, Rat(0)), InputError);
  CHECK_THROWS_AS(network.add_arc(0, 1, -1, Rat(0)), InputError);
  CHECK_THROWS_AS(min_cost_flow(network, -1), InputError);
}

TEST_CASE("flow debug dump mentions every arc") {
  FlowNetwork network(3, 0, 2);
  network.add_arc(0, 1, 2, Rat(1, 2));
  network.add_arc(1, 2, 1, Rat(-1));
  std::string dot = debug_dot(network);
  CHECK(dot.find("1/2") != std::string::npos);
  CHECK(dot.find("-1") != std::string::npos);
}
