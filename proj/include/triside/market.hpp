#pragma once

#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "triside/rational.hpp"

namespace triside {

// A buyer-store pair: the unit of demand a courier can deliver.
struct Order {
  int buyer = -1;
  int store = -1;
  friend auto operator<=>(const Order&, const Order&) = default;
};

// One executed transaction: buyer purchases at store, courier delivers.
struct Trade {
  int buyer = -1;
  int store = -1;
  int courier = -1;
  friend auto operator<=>(const Trade&, const Trade&) = default;
};

// A three-sided matching. Kept sorted so that equal allocations compare
// equal; feasibility (each agent appearing at most once) is checked by
// validate_allocation, not by the type.
struct Allocation {
  std::vector<Trade> trades;

  void canonicalize();              // sort and drop exact duplicates
  std::vector<Order> orders() const;  // delivered buyer-store pairs, sorted

  friend bool operator==(const Allocation&, const Allocation&) = default;
};

// A market instance: every buyer has a valuation for every store, every
// courier has a delivery cost for every buyer-store pair, and each store may
// carry a fixed cost charged when it sells. All quantities are nonnegative
// exact rationals; ids are opaque strings addressed internally by their
// declaration index.
class Market {
 public:
  Market(std::vector<std::string> buyers, std::vector<std::string> stores,
         std::vector<std::string> couriers, RatGrid valuation,
         std::vector<RatGrid> cost, std::vector<Rat> store_cost = {});

  int num_buyers() const { return static_cast<int>(buyers_.size()); }
  int num_stores() const { return static_cast<int>(stores_.size()); }
  int num_couriers() const { return static_cast<int>(couriers_.size()); }

  const std::vector<std::string>& buyer_ids() const { return buyers_; }
  const std::vector<std::string>& store_ids() const { return stores_; }
  const std::vector<std::string>& courier_ids() const { return couriers_; }

  const Rat& valuation(int buyer, int store) const { return valuation_(buyer, store); }
  const Rat& cost(int courier, int buyer, int store) const {
    return cost_[static_cast<size_t>(courier)](buyer, store);
  }
  const Rat& store_cost(int store) const { return store_cost_[static_cast<size_t>(store)]; }
  bool has_store_costs() const { return has_store_costs_; }

  const RatGrid& valuation_grid() const { return valuation_; }
  const std::vector<RatGrid>& cost_slices() const { return cost_; }
  const std::vector<Rat>& store_costs() const { return store_cost_; }

  // Index lookups throw InputError for unknown ids.
  int buyer_index(const std::string& id) const;
  int store_index(const std::string& id) const;
  int courier_index(const std::string& id) const;

  Rat max_valuation() const;

 private:
  std::vector<std::string> buyers_, stores_, couriers_;
  RatGrid valuation_;            // buyer x store
  std::vector<RatGrid> cost_;    // per courier, buyer x store
  std::vector<Rat> store_cost_;  // per store
  bool has_store_costs_ = false;
  std::unordered_map<std::string, int> buyer_lookup_, store_lookup_, courier_lookup_;
};

// Posted store prices, per-order delivery compensations, per-order tips.
struct PriceSystem {
  std::vector<Rat> purchase;  // by store
  RatGrid compensation;       // buyer x store
  RatGrid tip;                // buyer x store

  static PriceSystem zeros(const Market& market);
  friend bool operator==(const PriceSystem&, const PriceSystem&) = default;
};

// Throws InputError when dimensions do not match the market or any entry is
// negative.
void check_price_system(const Market& market, const PriceSystem& prices);

// True when every referenced agent exists and no buyer, store or courier
// appears twice. Out-of-range indices are an InputError (the caller passed
// ids that never resolved against this market), not mere infeasibility.
bool validate_allocation(const Market& market, const Allocation& allocation);

// Sum of valuation minus store cost minus delivery cost over the executed
// trades. Throws InputError when the allocation is infeasible.
Rat welfare(const Market& market, const Allocation& allocation);

// Additive price adjustment recorded when store costs are folded away, so
// that prices found in the reduced market can be carried back.
struct PriceShift {
  std::vector<Rat> per_store;

  PriceSystem apply(const PriceSystem& prices) const;
};

// Folds store costs into valuations: the reduced market prices the net value
// of each order and carries zero store costs. A valuation below its store
// cost cannot be folded and is an InputError.
std::pair<Market, PriceShift> normalize_store_costs(const Market& market);

}  // namespace triside
