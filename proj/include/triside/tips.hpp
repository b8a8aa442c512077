#pragma once

#include <vector>

#include "triside/market.hpp"

namespace triside {

// Buyer-by-store grid of lower tip bounds.
using TipMatrix = RatGrid;

// The smallest tip that makes delivering (buyer, store) a best response for
// this courier, holding compensations and the other buyers' tips fixed. The
// buyer's own hypothetical tips on her other orders are zero: she would only
// actively tip the order she wants delivered. Always nonnegative.
Rat min_tip_for_courier(const Market& market, const RatGrid& compensation,
                        const RatGrid& other_tips, int buyer, int store, int courier);

// The cheapest way for the buyer to get (buyer, store) delivered by anyone:
// the minimum of min_tip_for_courier over couriers.
Rat min_tip(const Market& market, const RatGrid& compensation,
            const RatGrid& other_tips, int buyer, int store);

// Lower tip bounds in the equilibria built from a courier plan for `omega`:
// zero on the delivered orders, and otherwise the cheapest courier once that
// courier's ceiling utility has been bought out.
TipMatrix equilibrium_min_tips(const Market& market, const std::vector<Order>& omega,
                               const std::vector<Rat>& max_utilities);

}  // namespace triside
