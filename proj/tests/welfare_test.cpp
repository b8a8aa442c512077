#include <doctest.h>

#include <algorithm>
#include <optional>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "triside/equilibrium.hpp"
#include "triside/errors.hpp"
#include "triside/welfare.hpp"
#include "util.hpp"

using namespace triside;
using fixtures::fig1;
using fixtures::fig2;
using fixtures::fig3;
using fixtures::random_market;

TEST_CASE("exhaustive welfare optimum on the fixed markets") {
  OptResult result = optimal_welfare_bruteforce(fig1());
  CHECK(result.welfare == 3);
  CHECK(result.allocation.trades == std::vector<Trade>{{0, 0, 0}});

  result = optimal_welfare_bruteforce(fig2());
  CHECK(result.welfare == 4);
  CHECK(result.allocation.trades == std::vector<Trade>{{0, 0, 0}});

  result = optimal_welfare_bruteforce(fig3(Rat(3)));
  CHECK(result.welfare == 1);
  CHECK(result.allocation.trades == std::vector<Trade>{{0, 0, 0}});
}

TEST_CASE("exhaustive welfare optimum agrees with the independent enumeration") {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    Market market = random_market(seed, 3, 3, 3, Family::RandomUnstructured, 9, 2);
    CAPTURE(seed);
    OptResult result = optimal_welfare_bruteforce(market);
    CHECK(result.welfare == oracles::optimal_welfare(market));
    CHECK(validate_allocation(market, result.allocation));
    CHECK(welfare(market, result.allocation) == result.welfare);
    CHECK(std::is_sorted(result.allocation.trades.begin(),
                         result.allocation.trades.end()));
  }
}

TEST_CASE("welfare ties resolve to the smallest trade list") {
  // Every trade nets exactly zero, so the empty allocation wins the tie.
  RatGrid values(2, 2);
  values(0, 0) = values(0, 1) = values(1, 0) = values(1, 1) = 1;
  RatGrid cost(2, 2);
  cost(0, 0) = cost(0, 1) = cost(1, 0) = cost(1, 1) = 1;
  Market market({"b1", "b2"}, {"s1", "s2"}, {"d1", "d2"}, values, {cost, cost});
  OptResult result = optimal_welfare_bruteforce(market);
  CHECK(result.welfare == 0);
  CHECK(result.allocation.trades.empty());

  // Determinism: the same market yields the same answer again.
  OptResult again = optimal_welfare_bruteforce(market);
  CHECK(again.allocation == result.allocation);
}

TEST_CASE("exhaustive searches refuse oversized markets") {
  Market wide = random_market(9, 2, 2, 7);
  CHECK_THROWS_AS(optimal_welfare_bruteforce(wide), CapError);
  CHECK_THROWS_AS(optimal_equilibrium_welfare_bruteforce(wide), CapError);
  CHECK_NOTHROW(optimal_welfare_bruteforce(wide, 7));
  try {
    optimal_welfare_bruteforce(wide);
  } catch (const CapError& error) {
    CHECK(std::string(error.what()).find("cap") != std::string::npos);
  }
}

TEST_CASE("cost structure detection on the fixed markets") {
  CHECK(detect_cost_structure(fig1()).kind == CostKind::CourierStore);
  CHECK(detect_cost_structure(fig2()).kind == CostKind::CourierStore);
  CHECK(detect_cost_structure(fig3(Rat(3))).kind == CostKind::Unstructured);
  CHECK(std::string(cost_kind_tag(CostKind::CourierStore)) == "courier-store");
  CHECK(std::string(cost_kind_tag(CostKind::CourierBuyer)) == "courier-buyer");
  CHECK(std::string(cost_kind_tag(CostKind::SingleMindedBuyers)) == "single-minded-buyers");
  CHECK(std::string(cost_kind_tag(CostKind::Unstructured)) == "unstructured");
}

TEST_CASE("detected decompositions reproduce the cost tensor") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    for (Family family : {Family::RandomCourierStore, Family::RandomCourierBuyer}) {
      Market market = random_market(seed, 3, 3, 2, family, 8, 1);
      CAPTURE(seed);
      CostStructure structure = detect_cost_structure(market);
      CHECK(structure.kind == (family == Family::RandomCourierStore
                                   ? CostKind::CourierStore
                                   : CostKind::CourierBuyer));
      for (int d = 0; d < market.num_couriers(); ++d)
        for (int b = 0; b < market.num_buyers(); ++b)
          for (int s = 0; s < market.num_stores(); ++s) {
            int key = structure.kind == CostKind::CourierStore ? s : b;
            CHECK(structure.shared(b, s) +
                      structure.courier_part[static_cast<size_t>(d)]
                                           [static_cast<size_t>(key)] ==
                  market.cost(d, b, s));
          }
    }
  }
}

TEST_CASE("single-minded valuations are detected when costs are generic") {
  RatGrid values(2, 2);
  values(0, 0) = 5;
  values(1, 1) = 7;
  RatGrid cost(2, 2);
  cost(0, 0) = 1;
  cost(0, 1) = 9;
  cost(1, 0) = 9;
  cost(1, 1) = 2;
  RatGrid other(2, 2);
  other(0, 0) = 2;
  other(0, 1) = 3;
  other(1, 0) = 5;
  other(1, 1) = 7;
  Market market({"b1", "b2"}, {"s1", "s2"}, {"d1", "d2"}, values, {cost, other});
  CHECK(detect_cost_structure(market).kind == CostKind::SingleMindedBuyers);

  OptResult direct = optimal_welfare_single_minded(market);
  OptResult brute = optimal_welfare_bruteforce(market);
  CHECK(direct.welfare == brute.welfare);
  // Each buyer's cheapest courier is d1, but d1 can carry only one order:
  // the optimum sends b1's order with d2 (5-2) and b2's with d1 (7-2).
  CHECK(direct.welfare == 8);

  // A buyer with two positively valued stores is out of scope.
  CHECK_THROWS_AS(optimal_welfare_single_minded(fig2()), InputError);
}

TEST_CASE("flow optimum equals the exhaustive one on decomposable markets") {
  for (std::uint64_t seed = 30; seed < 55; ++seed) {
    for (Family family : {Family::RandomCourierStore, Family::RandomCourierBuyer}) {
      int buyers = 2 + static_cast<int>(seed % 3);
      Market market = random_market(seed, buyers, 3, 3, family, 9, 2);
      CAPTURE(seed);
      CAPTURE(family_tag(family));
      CostStructure structure = detect_cost_structure(market);
      OptResult flow = optimal_welfare_flow(market, structure);
      OptResult brute = optimal_welfare_bruteforce(market);
      CHECK(flow.welfare == brute.welfare);
      CHECK(validate_allocation(market, flow.allocation));
      CHECK(welfare(market, flow.allocation) == flow.welfare);
    }
  }
  CostStructure none;
  CHECK_THROWS_AS(optimal_welfare_flow(fig3(Rat(3)), none), InputError);
}

TEST_CASE("single-minded flow optimum equals the exhaustive one") {
  for (std::uint64_t seed = 60; seed < 85; ++seed) {
    Market market = random_market(seed, 3, 3, 2, Family::RandomSingleMinded, 9, 1);
    CAPTURE(seed);
    OptResult direct = optimal_welfare_single_minded(market);
    OptResult brute = optimal_welfare_bruteforce(market);
    CHECK(direct.welfare == brute.welfare);
    CHECK(welfare(market, direct.allocation) == direct.welfare);
  }
}

TEST_CASE("structured markets support their welfare optimum in equilibrium") {
  for (std::uint64_t seed = 90; seed < 110; ++seed) {
    Family family = seed % 3 == 0   ? Family::RandomCourierStore
                    : seed % 3 == 1 ? Family::RandomCourierBuyer
                                    : Family::RandomSingleMinded;
    Market market = random_market(seed, 3, 3, 2, family, 9, 1);
    CAPTURE(seed);
    CAPTURE(family_tag(family));
    EquilibriumCertificate certificate = efficient_equilibrium_structured(market);
    CHECK(verify(market, certificate).ok);
    CHECK(welfare(market, certificate.allocation) ==
          optimal_welfare_bruteforce(market).welfare);
  }
  CHECK_THROWS_AS(efficient_equilibrium_structured(fig3(Rat(3))), InputError);
}

TEST_CASE("optimal equilibrium welfare on the fixed markets") {
  // Tips unlock the efficient outcome in the two-courier market.
  auto best = optimal_equilibrium_welfare_bruteforce(fig1());
  REQUIRE(best.has_value());
  CHECK(best->welfare == 3);
  CHECK(best->certificate.allocation.trades == std::vector<Trade>{{0, 0, 0}});
  CHECK(verify(fig1(), best->certificate).ok);

  // With delivery costs above two, every equilibrium of this market wastes
  // welfare: the best supportable outcome nets -1 against an optimum of 1.
  Market third = fig3(Rat(3));
  auto constrained = optimal_equilibrium_welfare_bruteforce(third);
  REQUIRE(constrained.has_value());
  CHECK(constrained->welfare == -1);
  CHECK(constrained->certificate.allocation.trades.size() == 2);
  CHECK(verify(third, constrained->certificate).ok);
  CHECK(optimal_welfare_bruteforce(third).welfare == 1);

  // The gap persists for other parameter values above the threshold.
  Market steeper = fig3(Rat(5, 2));
  auto still = optimal_equilibrium_welfare_bruteforce(steeper);
  REQUIRE(still.has_value());
  CHECK(still->welfare < optimal_welfare_bruteforce(steeper).welfare);
}

TEST_CASE("optimal equilibrium welfare equals the filtered maximum") {
  for (std::uint64_t seed = 120; seed < 140; ++seed) {
    Market market = random_market(seed, 2, 3, 2, Family::RandomUnstructured, 9, 2);
    CAPTURE(seed);
    std::optional<Rat> filtered;
    for (const Allocation& allocation : oracles::all_allocations(market)) {
      auto certificate = supports_equilibrium(market, allocation);
      if (!certificate) continue;
      Rat value = welfare(market, certificate->allocation);
      if (!filtered || value > *filtered) filtered = value;
    }
    auto best = optimal_equilibrium_welfare_bruteforce(market);
    REQUIRE(best.has_value() == filtered.has_value());
    if (best) {
      CHECK(best->welfare == *filtered);
      CHECK(verify(market, best->certificate).ok);
      CHECK(welfare(market, best->certificate.allocation) == best->welfare);
    }
  }
}

TEST_CASE("markets where only the empty outcome is an equilibrium") {
  // One worthless order served at positive cost: delivering is never part of
  // an equilibrium, but the empty outcome is one.
  RatGrid values(1, 1);
  values(0, 0) = 1;
  RatGrid cost(1, 1);
  cost(0, 0) = 2;
  Market market({"b"}, {"s"}, {"d"}, values, {cost});
  auto best = optimal_equilibrium_welfare_bruteforce(market);
  REQUIRE(best.has_value());
  CHECK(best->welfare == 0);
  CHECK(best->certificate.allocation.trades.empty());
  CHECK(verify(market, best->certificate).ok);
}

TEST_CASE("triple-matching reductions") {
  Market paired = hardness_instance_from_3dm(2, {{0, 0, 0}, {1, 1, 1}});
  CHECK(paired.num_buyers() == 2);
  CHECK(paired.valuation(0, 0) == 1);
  CHECK(paired.cost(0, 0, 0) == 0);
  CHECK(paired.cost(0, 0, 1) == 1);
  CHECK(paired.cost(1, 1, 1) == 0);
  CHECK(oracles::has_perfect_triple_matching(2, {{0, 0, 0}, {1, 1, 1}}));
  auto best = optimal_equilibrium_welfare_bruteforce(paired);
  REQUIRE(best.has_value());
  CHECK(best->welfare == 2);

  // Two triples fighting over one store: no perfect matching, less welfare.
  Market blocked = hardness_instance_from_3dm(2, {{0, 0, 0}, {1, 0, 1}});
  CHECK(!oracles::has_perfect_triple_matching(2, {{0, 0, 0}, {1, 0, 1}}));
  auto worse = optimal_equilibrium_welfare_bruteforce(blocked);
  REQUIRE(worse.has_value());
  CHECK(worse->welfare < 2);

  CHECK_THROWS_AS(hardness_instance_from_3dm(0, {}), InputError);
  CHECK_THROWS_AS(hardness_instance_from_3dm(2, {{0, 0, 2}}), InputError);
  CHECK_THROWS_AS(hardness_instance_from_3dm(2, {{-1, 0, 0}}), InputError);
}

TEST_CASE("equilibrium welfare reaches the side count exactly on perfect systems") {
  std::mt19937_64 rng(424242);
  int perfect_seen = 0, imperfect_seen = 0;
  for (int round = 0; round < 12; ++round) {
    const int side = 3;
    std::vector<std::array<int, 3>> triples;
    for (int b = 0; b < side; ++b)
      for (int s = 0; s < side; ++s)
        for (int d = 0; d < side; ++d)
          if (rng() % 4 == 0) triples.push_back({b, s, d});
    CAPTURE(round);
    Market market = hardness_instance_from_3dm(side, triples);
    auto best = optimal_equilibrium_welfare_bruteforce(market);
    REQUIRE(best.has_value());
    bool perfect = oracles::has_perfect_triple_matching(side, triples);
    CHECK((best->welfare == side) == perfect);
    (perfect ? perfect_seen : imperfect_seen) += 1;
  }
  CHECK(perfect_seen >= 1);
  CHECK(imperfect_seen >= 1);
}
