#pragma once

#include <vector>

#include "triside/market.hpp"

namespace triside {

// Compensation schedule plus courier assignment under which exactly the
// target orders are delivered and every courier is playing a best response.
// Compensations are zero away from the target orders.
struct CourierPlan {
  std::vector<Order> target_orders;
  RatGrid compensation;         // buyer x store, zero off target_orders
  std::vector<int> assignment;  // per courier: index into target_orders, -1 if idle
  std::vector<Rat> max_utility; // ceiling utility per courier, attained here
  Rat assignment_cost;          // total delivery cost of the assignment
};

// The utility ceiling of each courier over every compensation schedule that
// gets exactly `omega` delivered. With fewer orders than couriers this is
// the cost the market saves by having the courier around; when the counts
// are equal, compensations can be pushed arbitrarily high and the ceiling is
// normalized by a constant large enough to dominate every valuation.
//
// Requires distinct buyers, distinct stores, and |omega| <= courier count.
std::vector<Rat> max_courier_utilities(const Market& market,
                                       const std::vector<Order>& omega);

// Builds the plan attaining those ceilings: couriers cover `omega` at
// minimum total cost and each delivered order pays its courier's ceiling on
// top of that courier's cost. The best-response property is re-checked
// before returning; a failure is an InternalError.
CourierPlan build_courier_plan(const Market& market, const std::vector<Order>& omega);

}  // namespace triside
