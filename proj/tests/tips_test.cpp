#include <doctest.h>

#include <random>
#include <vector>

#include "triside/courier_plan.hpp"
#include "triside/errors.hpp"
#include "triside/tips.hpp"
#include "util.hpp"

using namespace triside;
using fixtures::fig1;
using fixtures::fig2;
using fixtures::random_market;

namespace {

// The naked best-response question the lower bounds answer: with tip `tau`
// on (buyer, store), is delivering it a best response for this courier? The
// buyer's standing tips on her other orders are treated as withdrawn.
bool courier_would_deliver(const Market& market, const RatGrid& compensation,
                           const RatGrid& tips, int buyer, int store, int courier,
                           const Rat& tau) {
  Rat own = compensation(buyer, store) + tau - market.cost(courier, buyer, store);
  if (own < 0) return false;
  for (int b = 0; b < market.num_buyers(); ++b)
    for (int s = 0; s < market.num_stores(); ++s) {
      if (b == buyer && s == store) continue;
      Rat offer = compensation(b, s);
      if (b != buyer) offer += tips(b, s);
      if (own < offer - market.cost(courier, b, s)) return false;
    }
  return true;
}

bool someone_would_deliver(const Market& market, const RatGrid& compensation,
                           const RatGrid& tips, int buyer, int store, const Rat& tau) {
  for (int d = 0; d < market.num_couriers(); ++d)
    if (courier_would_deliver(market, compensation, tips, buyer, store, d, tau))
      return true;
  return false;
}

}  // namespace

TEST_CASE("lower tip bound on the two-courier single-store market") {
  // Compensations of the known equilibrium serving the low-value buyer.
  Market market = fig1();
  RatGrid compensation(2, 1), tips(2, 1);
  compensation(0, 0) = 1;

  // To lure either courier away the high-value buyer must cover the courier's
  // cost and beat the standing offer: 12 for both couriers.
  CHECK(min_tip_for_courier(market, compensation, tips, 1, 0, 0) == 12);
  CHECK(min_tip_for_courier(market, compensation, tips, 1, 0, 1) == 12);
  CHECK(min_tip(market, compensation, tips, 1, 0) == 12);

  // The served buyer herself needs no tip.
  CHECK(min_tip(market, compensation, tips, 0, 0) == 0);
}

TEST_CASE("lower tip bound in the single-courier market") {
  Market market = fig2();
  RatGrid compensation(2, 2), tips(2, 2);
  compensation(0, 0) = 4;
  CHECK(min_tip(market, compensation, tips, 1, 0) == 4);
  CHECK(min_tip(market, compensation, tips, 1, 1) == 4);
  CHECK(min_tip(market, compensation, tips, 0, 1) == 4);
  CHECK(min_tip(market, compensation, tips, 0, 0) == 0);
}

TEST_CASE("own standing tips are withdrawn, others' tips compete") {
  Market market = fig2();
  RatGrid compensation(2, 2), tips(2, 2);
  compensation(0, 0) = 4;

  // A tip the same buyer left elsewhere changes nothing for her.
  RatGrid own = tips;
  own(1, 1) = 100;
  CHECK(min_tip(market, compensation, own, 1, 0) ==
        min_tip(market, compensation, tips, 1, 0));

  // A competing buyer's tip raises the bar.
  RatGrid rival = tips;
  rival(0, 0) = 5;
  CHECK(min_tip(market, compensation, rival, 1, 0) == 9);
}

TEST_CASE("the bound is achieved and nothing below it works") {
  std::mt19937_64 rng(90210);
  int positive_bounds = 0;
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    Market market = random_market(seed, 3, 2, 2, Family::RandomUnstructured, 10, 2);
    RatGrid compensation(3, 2), tips(3, 2);
    for (int b = 0; b < 3; ++b)
      for (int s = 0; s < 2; ++s) {
        compensation(b, s) = Rat(static_cast<long>(rng() % 9), 2);
        tips(b, s) = Rat(static_cast<long>(rng() % 5), 2);
      }
    for (int b = 0; b < 3; ++b)
      for (int s = 0; s < 2; ++s) {
        CAPTURE(seed);
        Rat bound = min_tip(market, compensation, tips, b, s);
        REQUIRE(bound >= 0);
        CHECK(someone_would_deliver(market, compensation, tips, b, s, bound));
        if (bound > 0) {
          ++positive_bounds;
          CHECK(!someone_would_deliver(market, compensation, tips, b, s, Rat(0)));
          CHECK(!someone_would_deliver(market, compensation, tips, b, s,
                                       bound / 2));
          Rat epsilon = bound / Rat(mpz_class(1) << 40);
          CHECK(!someone_would_deliver(market, compensation, tips, b, s,
                                       bound - epsilon));
        }
      }
  }
  CHECK(positive_bounds > 50);  // the sampling really exercised the bound
}

TEST_CASE("plan-based bounds equal the general bounds under plan prices") {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    Market market = random_market(seed, 3, 3, 2, Family::RandomUnstructured, 9, 2);
    std::vector<std::vector<Order>> omegas = {
        {},
        {{0, 1}},
        {{1, 2}, {2, 0}},  // every courier busy
    };
    for (const auto& omega : omegas) {
      CAPTURE(seed);
      CAPTURE(omega.size());
      CourierPlan plan = build_courier_plan(market, omega);
      TipMatrix bounds = equilibrium_min_tips(market, omega, plan.max_utility);
      RatGrid no_tips(3, 3);
      for (int b = 0; b < 3; ++b)
        for (int s = 0; s < 3; ++s) {
          CAPTURE(b);
          CAPTURE(s);
          CHECK(bounds(b, s) == min_tip(market, plan.compensation, no_tips, b, s));
        }
    }
  }
}

TEST_CASE("tip bound inputs are validated") {
  Market market = fig1();
  RatGrid good(2, 1), bad(1, 1);
  CHECK_THROWS_AS(min_tip(market, bad, good, 0, 0), InputError);
  CHECK_THROWS_AS(min_tip(market, good, bad, 0, 0), InputError);
  CHECK_THROWS_AS(min_tip(market, good, good, 2, 0), InputError);
  CHECK_THROWS_AS(min_tip(market, good, good, 0, 1), InputError);
  CHECK_THROWS_AS(min_tip_for_courier(market, good, good, 0, 0, 9), InputError);
  CHECK_THROWS_AS(equilibrium_min_tips(market, {}, {Rat(0)}), InputError);
  CHECK_THROWS_AS(equilibrium_min_tips(market, {}, {Rat(0), Rat(-1)}), InputError);
  CHECK_THROWS_AS(equilibrium_min_tips(market, {{9, 0}}, {Rat(0), Rat(0)}), InputError);
}
