#include <doctest.h>

#include <vector>

#include "oracles.hpp"
#include "triside/equilibrium.hpp"
#include "triside/errors.hpp"
#include "util.hpp"

using namespace triside;
using fixtures::fig1;
using fixtures::random_market;

namespace {

// Independent supportability probe for order sets leaving a courier idle:
// compute each courier's utility ceiling by the difference-constraint
// reference, derive the least-tip grid from the ceilings, and ask whether
// the delivered orders form a maximum-weight matching under the
// tip-discounted values.
bool supportable_by_reference(const Market& market, const std::vector<Order>& omega) {
  std::vector<Rat> ceilings = oracles::courier_utility_ceilings(market, omega);
  RatGrid net(market.num_buyers(), market.num_stores());
  std::vector<BipartiteEdge> edges;
  for (int b = 0; b < market.num_buyers(); ++b)
    for (int s = 0; s < market.num_stores(); ++s) {
      bool delivered = false;
      for (const Order& order : omega)
        if (order.buyer == b && order.store == s) delivered = true;
      Rat discount = 0;
      if (!delivered) {
        discount = market.cost(0, b, s) + ceilings[0];
        for (int d = 1; d < market.num_couriers(); ++d)
          discount = std::min(discount,
                              Rat(market.cost(d, b, s) + ceilings[static_cast<size_t>(d)]));
      }
      net(b, s) = market.valuation(b, s) - discount;
      edges.push_back({b, s, net(b, s)});
    }
  Rat delivered_total = 0;
  for (const Order& order : omega) delivered_total += net(order.buyer, order.store);
  return delivered_total ==
         oracles::max_matching_weight(market.num_buyers(), market.num_stores(), edges);
}

Rat assignment_cost(const Market& market, const Allocation& allocation) {
  Rat cost = 0;
  for (const Trade& trade : allocation.trades)
    cost += market.cost(trade.courier, trade.buyer, trade.store);
  return cost;
}

std::optional<Rat> cheapest_cover_cost(const Market& market,
                                       const std::vector<Order>& omega) {
  std::vector<BipartiteEdge> edges;
  for (size_t o = 0; o < omega.size(); ++o)
    for (int d = 0; d < market.num_couriers(); ++d)
      edges.push_back({static_cast<int>(o), d,
                       market.cost(d, omega[o].buyer, omega[o].store)});
  std::vector<int> targets(omega.size());
  for (size_t o = 0; o < omega.size(); ++o) targets[o] = static_cast<int>(o);
  return oracles::min_cover_cost(static_cast<int>(omega.size()),
                                 market.num_couriers(), edges, targets);
}

}  // namespace

TEST_CASE("supporting the best trade of the two-courier single-store market") {
  Market market = fig1();
  Allocation allocation{{{0, 0, 0}}};
  auto certificate = supports_equilibrium(market, allocation);
  REQUIRE(certificate.has_value());
  CHECK(certificate->allocation == allocation);
  CHECK(certificate->mode == Mode::WithTip);
  CHECK(certificate->market_clearing);
  // The rival buyer anticipates a prohibitive tip, so the store is free.
  CHECK(certificate->prices.purchase == std::vector<Rat>{Rat(0)});
  CHECK(certificate->prices.compensation(0, 0) == 1);
  CHECK(certificate->prices.tip.all_zero());
  CHECK(verify(market, *certificate).ok);
}

TEST_CASE("supportability is decided by the delivered orders only") {
  Market market = fig1();
  // Same order, the expensive courier: supportable, but only after moving
  // the job to the cheap courier.
  Allocation expensive{{{0, 0, 1}}};
  auto certificate = supports_equilibrium(market, expensive);
  REQUIRE(certificate.has_value());
  CHECK(certificate->allocation.trades == std::vector<Trade>{{0, 0, 0}});
  CHECK(verify(market, *certificate).ok);
  CHECK(supportable_order_set(market, {{0, 0}}));
}

TEST_CASE("ties between couriers keep the given assignment") {
  // Both couriers cost the same, so either assignment is already cheapest.
  RatGrid values(1, 1);
  values(0, 0) = 5;
  RatGrid cost(1, 1);
  cost(0, 0) = 2;
  Market market({"b"}, {"s"}, {"d1", "d2"}, values, {cost, cost});
  Allocation second{{{0, 0, 1}}};
  auto certificate = supports_equilibrium(market, second);
  REQUIRE(certificate.has_value());
  CHECK(certificate->allocation == second);
  CHECK(verify(market, *certificate).ok);
}

TEST_CASE("supportability decisions match the reference probe") {
  int supportable_seen = 0, unsupportable_seen = 0, reassigned = 0;
  for (std::uint64_t seed = 1; seed <= 35; ++seed) {
    Market market = random_market(seed, 3, 3, 3, Family::RandomUnstructured, 9, 2);
    for (const Allocation& allocation : oracles::all_allocations(market)) {
      const std::vector<Order> omega = allocation.orders();
      CAPTURE(seed);
      CAPTURE(omega.size());

      bool decided = supportable_order_set(market, omega);
      auto certificate = supports_equilibrium(market, allocation);
      CHECK(certificate.has_value() == decided);

      if (static_cast<int>(omega.size()) < market.num_couriers()) {
        CHECK(decided == supportable_by_reference(market, omega));
      } else {
        // With every courier in service the compensations can always
        // escalate until nobody else can afford to interfere.
        CHECK(decided);
      }

      if (!certificate) {
        ++unsupportable_seen;
        continue;
      }
      ++supportable_seen;
      CHECK(verify(market, *certificate).ok);
      CHECK(certificate->allocation.orders() == omega);

      auto cheapest = cheapest_cover_cost(market, omega);
      REQUIRE(cheapest.has_value());
      if (assignment_cost(market, allocation) == *cheapest) {
        CHECK(certificate->allocation == allocation);
      } else {
        ++reassigned;
        CHECK(assignment_cost(market, certificate->allocation) == *cheapest);
      }
    }
  }
  CHECK(supportable_seen >= 100);
  CHECK(unsupportable_seen >= 100);
  CHECK(reassigned >= 20);
}

TEST_CASE("supportability with store costs folds and shifts back") {
  // The market from the folding tests: store cost 1 on top of the fixture.
  RatGrid values(2, 1);
  values(0, 0) = 4;
  values(1, 0) = 11;
  RatGrid cost_a(2, 1), cost_b(2, 1);
  cost_a(1, 0) = 11;
  cost_b(0, 0) = 1;
  cost_b(1, 0) = 12;
  Market market({"b1", "b2"}, {"s1"}, {"d1", "d2"}, values, {cost_a, cost_b},
                {Rat(1)});
  Allocation allocation{{{0, 0, 0}}};
  auto certificate = supports_equilibrium(market, allocation);
  REQUIRE(certificate.has_value());
  CHECK(verify(market, *certificate).ok);
  // Reduced-market price 0 plus the store cost.
  CHECK(certificate->prices.purchase == std::vector<Rat>{Rat(1)});
}

TEST_CASE("supportability rejects malformed allocations") {
  Market market = fig1();
  CHECK_THROWS_AS(supports_equilibrium(market, Allocation{{{0, 0, 0}, {1, 0, 0}}}),
                  InputError);
  CHECK_THROWS_AS(supports_equilibrium(market, Allocation{{{4, 0, 0}}}), InputError);
  CHECK_THROWS_AS(supportable_order_set(market, {{0, 0}, {0, 0}}), InputError);
  CHECK_THROWS_AS(supportable_order_set(market, {{0, 5}}), InputError);
}
