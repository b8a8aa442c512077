#include "triside/market.hpp"

#include <algorithm>

#include "triside/errors.hpp"

namespace triside {

namespace {

std::unordered_map<std::string, int> build_lookup(const std::vector<std::string>& ids,
                                                  const char* side) {
  std::unordered_map<std::string, int> lookup;
  lookup.reserve(ids.size());
  for (size_t i = 0; i < ids.size(); ++i) {
    if (ids[i].empty())
      throw InputError(std::string(side) + " id at position " + std::to_string(i) +
                       " is empty");
    if (!lookup.emplace(ids[i], static_cast<int>(i)).second)
      throw InputError(std::string("duplicate ") + side + " id \"" + ids[i] + "\"");
  }
  return lookup;
}

int lookup_or_throw(const std::unordered_map<std::string, int>& lookup,
                    const std::string& id, const char* side) {
  auto it = lookup.find(id);
  if (it == lookup.end())
    throw InputError(std::string("unknown ") + side + " id \"" + id + "\"");
  return it->second;
}

}  // namespace

Market::Market(std::vector<std::string> buyers, std::vector<std::string> stores,
               std::vector<std::string> couriers, RatGrid valuation,
               std::vector<RatGrid> cost, std::vector<Rat> store_cost)
    : buyers_(std::move(buyers)),
      stores_(std::move(stores)),
      couriers_(std::move(couriers)),
      valuation_(std::move(valuation)),
      cost_(std::move(cost)),
      store_cost_(std::move(store_cost)) {
  if (buyers_.empty() || stores_.empty() || couriers_.empty())
    throw InputError("market needs at least one buyer, one store and one courier");
  buyer_lookup_ = build_lookup(buyers_, "buyer");
  store_lookup_ = build_lookup(stores_, "store");
  courier_lookup_ = build_lookup(couriers_, "courier");

  const int m = num_buyers(), n = num_stores(), l = num_couriers();
  if (valuation_.rows() != m || valuation_.cols() != n)
    throw InputError("valuation grid does not match buyer/store counts");
  if (static_cast<int>(cost_.size()) != l)
    throw InputError("cost tensor does not match courier count");
  for (const RatGrid& slice : cost_)
    if (slice.rows() != m || slice.cols() != n)
      throw InputError("cost tensor slice does not match buyer/store counts");
  if (store_cost_.empty()) store_cost_.assign(static_cast<size_t>(n), Rat(0));
  if (static_cast<int>(store_cost_.size()) != n)
    throw InputError("store cost vector does not match store count");

  for (int b = 0; b < m; ++b)
    for (int s = 0; s < n; ++s)
      if (valuation_(b, s) < 0)
        throw InputError("negative valuation for (" + buyers_[b] + ", " + stores_[s] + ")");
  for (int d = 0; d < l; ++d)
    for (int b = 0; b < m; ++b)
      for (int s = 0; s < n; ++s)
        if (cost_[static_cast<size_t>(d)](b, s) < 0)
          throw InputError("negative cost for (" + couriers_[d] + ", " + buyers_[b] +
                           ", " + stores_[s] + ")");
  for (int s = 0; s < n; ++s) {
    if (store_cost_[s] < 0)
      throw InputError("negative store cost for " + stores_[s]);
    if (store_cost_[s] != 0) has_store_costs_ = true;
  }
}

int Market::buyer_index(const std::string& id) const {
  return lookup_or_throw(buyer_lookup_, id, "buyer");
}

int Market::store_index(const std::string& id) const {
  return lookup_or_throw(store_lookup_, id, "store");
}

int Market::courier_index(const std::string& id) const {
  return lookup_or_throw(courier_lookup_, id, "courier");
}

Rat Market::max_valuation() const {
  Rat best = 0;
  for (int b = 0; b < num_buyers(); ++b)
    for (int s = 0; s < num_stores(); ++s)
      best = std::max(best, Rat(valuation_(b, s)));
  return best;
}

void Allocation::canonicalize() {
  std::sort(trades.begin(), trades.end());
  trades.erase(std::unique(trades.begin(), trades.end()), trades.end());
}

std::vector<Order> Allocation::orders() const {
  std::vector<Order> result;
  result.reserve(trades.size());
  for (const Trade& trade : trades) result.push_back({trade.buyer, trade.store});
  std::sort(result.begin(), result.end());
  return result;
}

PriceSystem PriceSystem::zeros(const Market& market) {
  PriceSystem prices;
  prices.purchase.assign(static_cast<size_t>(market.num_stores()), Rat(0));
  prices.compensation = RatGrid(market.num_buyers(), market.num_stores());
  prices.tip = RatGrid(market.num_buyers(), market.num_stores());
  return prices;
}

void check_price_system(const Market& market, const PriceSystem& prices) {
  const int m = market.num_buyers(), n = market.num_stores();
  if (static_cast<int>(prices.purchase.size()) != n)
    throw InputError("price vector does not match store count");
  if (prices.compensation.rows() != m || prices.compensation.cols() != n)
    throw InputError("compensation grid does not match buyer/store counts");
  if (prices.tip.rows() != m || prices.tip.cols() != n)
    throw InputError("tip grid does not match buyer/store counts");
  for (int s = 0; s < n; ++s)
    if (prices.purchase[s] < 0)
      throw InputError("negative price for store " + market.store_ids()[s]);
  for (int b = 0; b < m; ++b)
    for (int s = 0; s < n; ++s) {
      if (prices.compensation(b, s) < 0)
        throw InputError("negative compensation for (" + market.buyer_ids()[b] + ", " +
                         market.store_ids()[s] + ")");
      if (prices.tip(b, s) < 0)
        throw InputError("negative tip for (" + market.buyer_ids()[b] + ", " +
                         market.store_ids()[s] + ")");
    }
}

bool validate_allocation(const Market& market, const Allocation& allocation) {
  std::vector<bool> buyer_used(market.num_buyers(), false);
  std::vector<bool> store_used(market.num_stores(), false);
  std::vector<bool> courier_used(market.num_couriers(), false);
  for (const Trade& trade : allocation.trades) {
    if (trade.buyer < 0 || trade.buyer >= market.num_buyers() || trade.store < 0 ||
        trade.store >= market.num_stores() || trade.courier < 0 ||
        trade.courier >= market.num_couriers())
      throw InputError("allocation references an agent outside this market");
    if (buyer_used[trade.buyer] || store_used[trade.store] || courier_used[trade.courier])
      return false;
    buyer_used[trade.buyer] = true;
    store_used[trade.store] = true;
    courier_used[trade.courier] = true;
  }
  return true;
}

Rat welfare(const Market& market, const Allocation& allocation) {
  if (!validate_allocation(market, allocation))
    throw InputError("welfare of an infeasible allocation is undefined");
  Rat total = 0;
  for (const Trade& trade : allocation.trades) {
    total += market.valuation(trade.buyer, trade.store);
    total -= market.store_cost(trade.store);
    total -= market.cost(trade.courier, trade.buyer, trade.store);
  }
  return total;
}

PriceSystem PriceShift::apply(const PriceSystem& prices) const {
  PriceSystem shifted = prices;
  for (size_t s = 0; s < per_store.size(); ++s) shifted.purchase[s] += per_store[s];
  return shifted;
}

std::pair<Market, PriceShift> normalize_store_costs(const Market& market) {
  const int m = market.num_buyers(), n = market.num_stores();
  RatGrid net(m, n);
  for (int b = 0; b < m; ++b)
    for (int s = 0; s < n; ++s) {
      net(b, s) = market.valuation(b, s) - market.store_cost(s);
      if (net(b, s) < 0)
        throw InputError("valuation below store cost for (" + market.buyer_ids()[b] +
                         ", " + market.store_ids()[s] + ")");
    }
  Market reduced(market.buyer_ids(), market.store_ids(), market.courier_ids(),
                 std::move(net), market.cost_slices());
  PriceShift shift{market.store_costs()};
  return {std::move(reduced), std::move(shift)};
}

}  // namespace triside
