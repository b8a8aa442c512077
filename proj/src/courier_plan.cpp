#include "triside/courier_plan.hpp"

#include <algorithm>

#include "triside/errors.hpp"
#include "triside/matching.hpp"

namespace triside {

namespace {

void check_omega(const Market& market, const std::vector<Order>& omega) {
  std::vector<bool> buyer_used(market.num_buyers(), false);
  std::vector<bool> store_used(market.num_stores(), false);
  for (const Order& order : omega) {
    if (order.buyer < 0 || order.buyer >= market.num_buyers() || order.store < 0 ||
        order.store >= market.num_stores())
      throw InputError("target order references an agent outside this market");
    if (buyer_used[order.buyer])
      throw InputError("target orders repeat buyer " + market.buyer_ids()[order.buyer]);
    if (store_used[order.store])
      throw InputError("target orders repeat store " + market.store_ids()[order.store]);
    buyer_used[order.buyer] = true;
    store_used[order.store] = true;
  }
  if (omega.size() > static_cast<size_t>(market.num_couriers()))
    throw InputError("more target orders than couriers");
}

// Orders on the left, couriers on the right, delivery cost as weight.
std::vector<BipartiteEdge> delivery_edges(const Market& market,
                                          const std::vector<Order>& omega) {
  std::vector<BipartiteEdge> edges;
  edges.reserve(omega.size() * static_cast<size_t>(market.num_couriers()));
  for (size_t o = 0; o < omega.size(); ++o)
    for (int d = 0; d < market.num_couriers(); ++d)
      edges.push_back({static_cast<int>(o), d,
                       market.cost(d, omega[o].buyer, omega[o].store)});
  return edges;
}

std::vector<int> all_targets(size_t count) {
  std::vector<int> targets(count);
  for (size_t i = 0; i < count; ++i) targets[i] = static_cast<int>(i);
  return targets;
}

}  // namespace

std::vector<Rat> max_courier_utilities(const Market& market,
                                       const std::vector<Order>& omega) {
  check_omega(market, omega);
  const int l = market.num_couriers();
  std::vector<Rat> ceiling(static_cast<size_t>(l), Rat(0));
  if (omega.empty()) return ceiling;

  const auto edges = delivery_edges(market, omega);
  const auto targets = all_targets(omega.size());
  auto full = min_cost_cover_core(static_cast<int>(omega.size()), l, edges, targets);
  if (!full) throw InternalError("complete delivery graph failed to cover targets");

  if (omega.size() < static_cast<size_t>(l)) {
    // Removing a courier can only make covering the orders more expensive;
    // the difference is everything that courier could ever extract.
    for (int d = 0; d < l; ++d) {
      auto without = min_cost_cover_core(static_cast<int>(omega.size()), l, edges,
                                         targets, d);
      if (!without) throw InternalError("delivery cover infeasible without one courier");
      ceiling[static_cast<size_t>(d)] = without->total - full->total;
    }
    return ceiling;
  }

  // As many orders as couriers: everyone must deliver, compensations are
  // only bounded relative to each other, and the natural normalization pays
  // each courier more than any buyer values anything.
  Rat lift = 1;
  for (int b = 0; b < market.num_buyers(); ++b)
    for (int s = 0; s < market.num_stores(); ++s) lift += market.valuation(b, s);
  for (int d = 0; d < l; ++d)
    for (int b = 0; b < market.num_buyers(); ++b)
      for (int s = 0; s < market.num_stores(); ++s) lift += market.cost(d, b, s);

  for (int d = 0; d < l; ++d) {
    auto nearly = min_cost_cover_all_but_one_core(static_cast<int>(omega.size()), l,
                                                  edges, targets, d);
    if (!nearly) throw InternalError("all-but-one delivery cover infeasible");
    ceiling[static_cast<size_t>(d)] = lift + *nearly - full->total;
  }
  return ceiling;
}

CourierPlan build_courier_plan(const Market& market, const std::vector<Order>& omega) {
  CourierPlan plan;
  plan.target_orders = omega;
  plan.max_utility = max_courier_utilities(market, omega);
  plan.compensation = RatGrid(market.num_buyers(), market.num_stores());
  plan.assignment.assign(static_cast<size_t>(market.num_couriers()), -1);
  plan.assignment_cost = 0;
  if (!omega.empty()) {
    const auto edges = delivery_edges(market, omega);
    auto cover = min_cost_cover_core(static_cast<int>(omega.size()),
                                     market.num_couriers(), edges,
                                     all_targets(omega.size()));
    if (!cover) throw InternalError("complete delivery graph failed to cover targets");
    plan.assignment_cost = cover->total;
    for (const auto& [order_index, courier] : cover->edges) {
      plan.assignment[static_cast<size_t>(courier)] = order_index;
      const Order& order = omega[static_cast<size_t>(order_index)];
      plan.compensation(order.buyer, order.store) =
          plan.max_utility[static_cast<size_t>(courier)] +
          market.cost(courier, order.buyer, order.store);
    }
  }

  // Re-check the best-response property the construction promises: assigned
  // couriers attain their ceiling and see nothing better, idle couriers see
  // nothing positive.
  for (int d = 0; d < market.num_couriers(); ++d) {
    Rat best = 0;
    for (const Order& order : omega) {
      Rat utility = plan.compensation(order.buyer, order.store) -
                    market.cost(d, order.buyer, order.store);
      best = std::max(best, utility);
    }
    int assigned = plan.assignment[static_cast<size_t>(d)];
    if (assigned >= 0) {
      const Order& order = omega[static_cast<size_t>(assigned)];
      Rat utility = plan.compensation(order.buyer, order.store) -
                    market.cost(d, order.buyer, order.store);
      if (utility != plan.max_utility[static_cast<size_t>(d)] || utility < best)
        throw InternalError("courier plan does not attain the utility ceiling");
    } else {
      if (plan.max_utility[static_cast<size_t>(d)] != 0 || best > 0)
        throw InternalError("idle courier is not at a best response");
    }
  }
  return plan;
}

}  // namespace triside
