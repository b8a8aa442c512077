#include "triside/tips.hpp"

#include <algorithm>

#include "triside/errors.hpp"

namespace triside {

namespace {

void check_pair(const Market& market, int buyer, int store) {
  if (buyer < 0 || buyer >= market.num_buyers() || store < 0 ||
      store >= market.num_stores())
    throw InputError("buyer or store index outside this market");
}

void check_grid(const Market& market, const RatGrid& grid, const char* what) {
  if (grid.rows() != market.num_buyers() || grid.cols() != market.num_stores())
    throw InputError(std::string(what) + " grid does not match buyer/store counts");
}

}  // namespace

Rat min_tip_for_courier(const Market& market, const RatGrid& compensation,
                        const RatGrid& other_tips, int buyer, int store, int courier) {
  check_pair(market, buyer, store);
  check_grid(market, compensation, "compensation");
  check_grid(market, other_tips, "tip");
  if (courier < 0 || courier >= market.num_couriers())
    throw InputError("courier index outside this market");

  const Rat& base = compensation(buyer, store);
  const Rat& here = market.cost(courier, buyer, store);

  // The tip must lift the courier to nonnegative utility and above every
  // competing order, where competing orders pay their compensation plus the
  // standing tip of whichever other buyer placed them.
  Rat needed = 0;  // the "no tip needed" floor
  needed = std::max(needed, Rat(here - base));
  for (int b = 0; b < market.num_buyers(); ++b)
    for (int s = 0; s < market.num_stores(); ++s) {
      if (b == buyer && s == store) continue;
      Rat offer = compensation(b, s);
      if (b != buyer) offer += other_tips(b, s);
      needed = std::max(needed, Rat(offer - market.cost(courier, b, s) - base + here));
    }
  return needed;
}

Rat min_tip(const Market& market, const RatGrid& compensation,
            const RatGrid& other_tips, int buyer, int store) {
  Rat best = min_tip_for_courier(market, compensation, other_tips, buyer, store, 0);
  for (int d = 1; d < market.num_couriers(); ++d)
    best = std::min(best, min_tip_for_courier(market, compensation, other_tips, buyer,
                                              store, d));
  return best;
}

TipMatrix equilibrium_min_tips(const Market& market, const std::vector<Order>& omega,
                               const std::vector<Rat>& max_utilities) {
  if (max_utilities.size() != static_cast<size_t>(market.num_couriers()))
    throw InputError("utility ceilings do not match courier count");
  for (const Rat& ceiling : max_utilities)
    if (ceiling < 0) throw InputError("utility ceilings may not be negative");

  TipMatrix bounds(market.num_buyers(), market.num_stores());
  std::vector<bool> delivered(static_cast<size_t>(market.num_buyers()) *
                                  static_cast<size_t>(market.num_stores()),
                              false);
  for (const Order& order : omega) {
    check_pair(market, order.buyer, order.store);
    delivered[static_cast<size_t>(order.buyer) * market.num_stores() + order.store] =
        true;
  }

  for (int b = 0; b < market.num_buyers(); ++b)
    for (int s = 0; s < market.num_stores(); ++s) {
      if (delivered[static_cast<size_t>(b) * market.num_stores() + s]) continue;
      Rat best = market.cost(0, b, s) + max_utilities[0];
      for (int d = 1; d < market.num_couriers(); ++d)
        best = std::min(best, Rat(market.cost(d, b, s) + max_utilities[static_cast<size_t>(d)]));
      bounds(b, s) = best;
    }
  return bounds;
}

}  // namespace triside
