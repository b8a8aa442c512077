#include "triside/welfare.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "triside/errors.hpp"
#include "triside/flow.hpp"

namespace triside {

const char* cost_kind_tag(CostKind kind) {
  switch (kind) {
    case CostKind::CourierStore: return "courier-store";
    case CostKind::CourierBuyer: return "courier-buyer";
    case CostKind::SingleMindedBuyers: return "single-minded-buyers";
    case CostKind::Unstructured: return "unstructured";
  }
  return "?";
}

namespace {

void check_cap(const Market& market, int cap, const char* what) {
  int widest = std::max({market.num_buyers(), market.num_stores(), market.num_couriers()});
  if (widest > cap)
    throw CapError(std::string(what) + " refuses " + std::to_string(widest) +
                   " agents on one side (cap " + std::to_string(cap) +
                   "); use a structured solver or raise the cap");
}

// Walks every feasible allocation in buyer order, calling visit(trades,
// welfare) for each one; trades arrive sorted by buyer.
template <typename Visit>
void for_each_allocation(const Market& market, Visit&& visit) {
  std::vector<Trade> current;
  std::vector<bool> store_used(market.num_stores(), false);
  std::vector<bool> courier_used(market.num_couriers(), false);
  Rat running = 0;

  auto walk = [&](auto&& self, int buyer) -> void {
    if (buyer == market.num_buyers()) {
      visit(current, running);
      return;
    }
    self(self, buyer + 1);  // this buyer sits out
    for (int s = 0; s < market.num_stores(); ++s) {
      if (store_used[s]) continue;
      for (int d = 0; d < market.num_couriers(); ++d) {
        if (courier_used[d]) continue;
        store_used[s] = courier_used[d] = true;
        current.push_back({buyer, s, d});
        Rat gain = market.valuation(buyer, s) - market.store_cost(s) -
                   market.cost(d, buyer, s);
        running += gain;
        self(self, buyer + 1);
        running -= gain;
        current.pop_back();
        store_used[s] = courier_used[d] = false;
      }
    }
  };
  walk(walk, 0);
}

}  // namespace

OptResult optimal_welfare_bruteforce(const Market& market, int cap) {
  check_cap(market, cap, "optimal_welfare_bruteforce");
  OptResult best{Rat(0), {}};
  bool seeded = false;
  for_each_allocation(market, [&](const std::vector<Trade>& trades, const Rat& value) {
    if (!seeded || value > best.welfare ||
        (value == best.welfare && trades < best.allocation.trades)) {
      best.welfare = value;
      best.allocation.trades = trades;
      seeded = true;
    }
  });
  return best;
}

CostStructure detect_cost_structure(const Market& market) {
  const int m = market.num_buyers(), n = market.num_stores(), l = market.num_couriers();
  RatGrid shared(m, n);
  for (int b = 0; b < m; ++b)
    for (int s = 0; s < n; ++s) {
      Rat cheapest = market.cost(0, b, s);
      for (int d = 1; d < l; ++d) cheapest = std::min(cheapest, Rat(market.cost(d, b, s)));
      shared(b, s) = cheapest;
    }

  auto residual = [&](int d, int b, int s) { return market.cost(d, b, s) - shared(b, s); };

  bool by_store = true;
  for (int d = 0; d < l && by_store; ++d)
    for (int s = 0; s < n && by_store; ++s)
      for (int b = 1; b < m; ++b)
        if (residual(d, b, s) != residual(d, 0, s)) {
          by_store = false;
          break;
        }
  if (by_store) {
    CostStructure structure;
    structure.kind = CostKind::CourierStore;
    structure.shared = std::move(shared);
    structure.courier_part.resize(static_cast<size_t>(l));
    for (int d = 0; d < l; ++d) {
      structure.courier_part[d].reserve(static_cast<size_t>(n));
      for (int s = 0; s < n; ++s)
        structure.courier_part[d].push_back(market.cost(d, 0, s) - structure.shared(0, s));
    }
    return structure;
  }

  bool by_buyer = true;
  for (int d = 0; d < l && by_buyer; ++d)
    for (int b = 0; b < m && by_buyer; ++b)
      for (int s = 1; s < n; ++s)
        if (residual(d, b, s) != residual(d, b, 0)) {
          by_buyer = false;
          break;
        }
  if (by_buyer) {
    CostStructure structure;
    structure.kind = CostKind::CourierBuyer;
    structure.shared = std::move(shared);
    structure.courier_part.resize(static_cast<size_t>(l));
    for (int d = 0; d < l; ++d) {
      structure.courier_part[d].reserve(static_cast<size_t>(m));
      for (int b = 0; b < m; ++b)
        structure.courier_part[d].push_back(market.cost(d, b, 0) - structure.shared(b, 0));
    }
    return structure;
  }

  bool single_minded = true;
  for (int b = 0; b < m && single_minded; ++b) {
    int liked = 0;
    for (int s = 0; s < n; ++s)
      if (market.valuation(b, s) > 0) ++liked;
    single_minded = liked <= 1;
  }
  if (single_minded) return {CostKind::SingleMindedBuyers, {}, {}};
  return {CostKind::Unstructured, {}, {}};
}

namespace {

struct SweepPick {
  Rat welfare = 0;
  Allocation allocation;
};

// Runs min-cost flow for every trade count from zero up, turning each unit
// of flow back into a trade via the recorded arc meanings. Keeps the first
// (smallest) trade count among welfare ties.
template <typename Extract>
SweepPick sweep_flow(const FlowNetwork& network, int max_trades, Extract&& extract) {
  SweepPick best;  // zero trades is always available at welfare zero
  for (int f = 1; f <= max_trades; ++f) {
    auto flow = min_cost_flow(network, f);
    if (!flow) break;
    Rat value = -flow->cost;
    if (value > best.welfare) {
      best.welfare = value;
      best.allocation = extract(*flow);
    }
  }
  return best;
}

}  // namespace

OptResult optimal_welfare_flow(const Market& market, const CostStructure& structure) {
  const int m = market.num_buyers(), n = market.num_stores(), l = market.num_couriers();
  if (structure.kind != CostKind::CourierStore && structure.kind != CostKind::CourierBuyer)
    throw InputError("optimal_welfare_flow needs a decomposable cost structure");
  if (structure.shared.rows() != m || structure.shared.cols() != n ||
      static_cast<int>(structure.courier_part.size()) != l)
    throw InputError("cost structure does not match this market");
  const bool store_side = structure.kind == CostKind::CourierStore;
  for (const auto& part : structure.courier_part)
    if (static_cast<int>(part.size()) != (store_side ? n : m))
      throw InputError("cost structure does not match this market");

  // Unit-capacity path: agent -> order -> counterparty -> counterparty copy
  // -> courier. The copy node enforces the counterparty's unit supply while
  // leaving room for the courier-dependent cost on its outgoing arcs.
  const int primary = store_side ? m : n;    // source side
  const int secondary = store_side ? n : m;  // side the courier part keys on
  int next = 0;
  const int source = next++;
  const int primary_base = next;
  next += primary;
  const int order_base = next;
  next += m * n;
  const int secondary_base = next;
  next += secondary;
  const int copy_base = next;
  next += secondary;
  const int courier_base = next;
  next += l;
  const int sink = next++;

  FlowNetwork network(next, source, sink);
  for (int p = 0; p < primary; ++p)
    network.add_arc(source, primary_base + p, 1,
                    store_side ? Rat(0) : market.store_cost(p));
  std::vector<std::pair<int, Order>> order_arcs;
  for (int b = 0; b < m; ++b)
    for (int s = 0; s < n; ++s) {
      int order_node = order_base + b * n + s;
      int from = primary_base + (store_side ? b : s);
      int arc = network.add_arc(from, order_node, 1, -market.valuation(b, s));
      order_arcs.emplace_back(arc, Order{b, s});
      network.add_arc(order_node, secondary_base + (store_side ? s : b), 1,
                      structure.shared(b, s));
    }
  for (int q = 0; q < secondary; ++q)
    network.add_arc(secondary_base + q, copy_base + q, 1,
                    store_side ? market.store_cost(q) : Rat(0));
  std::vector<std::pair<int, std::pair<int, int>>> courier_arcs;  // (secondary, courier)
  for (int q = 0; q < secondary; ++q)
    for (int d = 0; d < l; ++d) {
      int arc = network.add_arc(copy_base + q, courier_base + d, 1,
                                structure.courier_part[d][q]);
      courier_arcs.emplace_back(arc, std::make_pair(q, d));
    }
  for (int d = 0; d < l; ++d) network.add_arc(courier_base + d, sink, 1, Rat(0));

  auto extract = [&](const FlowResult& flow) {
    std::vector<int> courier_of(static_cast<size_t>(secondary), -1);
    for (const auto& [arc, pair] : courier_arcs)
      if (flow.arc_flow[static_cast<size_t>(arc)] > 0)
        courier_of[static_cast<size_t>(pair.first)] = pair.second;
    Allocation allocation;
    for (const auto& [arc, order] : order_arcs)
      if (flow.arc_flow[static_cast<size_t>(arc)] > 0) {
        int q = store_side ? order.store : order.buyer;
        allocation.trades.push_back({order.buyer, order.store,
                                     courier_of[static_cast<size_t>(q)]});
      }
    allocation.canonicalize();
    return allocation;
  };

  SweepPick pick = sweep_flow(network, std::min({m, n, l}), extract);
  return {std::move(pick.welfare), std::move(pick.allocation)};
}

OptResult optimal_welfare_single_minded(const Market& market) {
  const int m = market.num_buyers(), n = market.num_stores(), l = market.num_couriers();
  std::vector<Order> wanted;  // at most one per buyer
  for (int b = 0; b < m; ++b) {
    int liked = -1;
    for (int s = 0; s < n; ++s) {
      if (market.valuation(b, s) <= 0) continue;
      if (liked >= 0)
        throw InputError("buyer " + market.buyer_ids()[b] +
                         " values more than one store; not single-minded");
      liked = s;
    }
    if (liked >= 0) wanted.push_back({b, liked});
  }

  int next = 0;
  const int source = next++;
  const int store_base = next;
  next += n;
  const int wanted_base = next;
  next += static_cast<int>(wanted.size());
  const int courier_base = next;
  next += l;
  const int sink = next++;

  FlowNetwork network(next, source, sink);
  for (int s = 0; s < n; ++s)
    network.add_arc(source, store_base + s, 1, market.store_cost(s));
  for (size_t i = 0; i < wanted.size(); ++i)
    network.add_arc(store_base + wanted[i].store, wanted_base + static_cast<int>(i), 1,
                    -market.valuation(wanted[i].buyer, wanted[i].store));
  std::vector<std::pair<int, Trade>> delivery_arcs;
  for (size_t i = 0; i < wanted.size(); ++i)
    for (int d = 0; d < l; ++d) {
      int arc = network.add_arc(wanted_base + static_cast<int>(i), courier_base + d, 1,
                                market.cost(d, wanted[i].buyer, wanted[i].store));
      delivery_arcs.emplace_back(arc, Trade{wanted[i].buyer, wanted[i].store, d});
    }
  for (int d = 0; d < l; ++d) network.add_arc(courier_base + d, sink, 1, Rat(0));

  auto extract = [&](const FlowResult& flow) {
    Allocation allocation;
    for (const auto& [arc, trade] : delivery_arcs)
      if (flow.arc_flow[static_cast<size_t>(arc)] > 0) allocation.trades.push_back(trade);
    allocation.canonicalize();
    return allocation;
  };

  SweepPick pick = sweep_flow(network, std::min({m, n, l}), extract);
  return {std::move(pick.welfare), std::move(pick.allocation)};
}

EquilibriumCertificate efficient_equilibrium_structured(const Market& market) {
  CostStructure structure = detect_cost_structure(market);
  OptResult optimum;
  switch (structure.kind) {
    case CostKind::CourierStore:
    case CostKind::CourierBuyer:
      optimum = optimal_welfare_flow(market, structure);
      break;
    case CostKind::SingleMindedBuyers:
      optimum = optimal_welfare_single_minded(market);
      break;
    case CostKind::Unstructured:
      throw InputError("market has no recognized structure; use the brute-force search");
  }
  auto certificate = supports_equilibrium(market, optimum.allocation);
  if (!certificate)
    throw InternalError("welfare optimum of a structured market failed to support");
  return *certificate;
}

std::optional<OptimalEquilibrium> optimal_equilibrium_welfare_bruteforce(
    const Market& market, int cap) {
  check_cap(market, cap, "optimal_equilibrium_welfare_bruteforce");

  // Supportability only depends on the delivered order set, so probe each
  // order set once even though many courier assignments share it. Store
  // costs are folded away up front; welfare is unchanged by the folding.
  const Market* probe_market = &market;
  std::optional<std::pair<Market, PriceShift>> reduced;
  if (market.has_store_costs()) {
    reduced = normalize_store_costs(market);
    probe_market = &reduced->first;
  }

  std::map<std::vector<Order>, bool> seen;
  std::optional<Rat> best_welfare;
  Allocation best_allocation;
  for_each_allocation(market, [&](const std::vector<Trade>& trades, const Rat& value) {
    if (best_welfare && value < *best_welfare) return;
    std::vector<Order> omega;
    omega.reserve(trades.size());
    for (const Trade& trade : trades) omega.push_back({trade.buyer, trade.store});
    auto [entry, fresh] = seen.try_emplace(omega, false);
    if (fresh) entry->second = supportable_order_set(*probe_market, omega);
    if (!entry->second) return;
    if (!best_welfare || value > *best_welfare ||
        (value == *best_welfare && trades < best_allocation.trades)) {
      best_welfare = value;
      best_allocation.trades = trades;
    }
  });

  if (!best_welfare) return std::nullopt;
  auto certificate = supports_equilibrium(market, best_allocation);
  if (!certificate)
    throw InternalError("order-set probe and certificate construction disagree");
  return OptimalEquilibrium{std::move(*best_welfare), std::move(*certificate)};
}

Market hardness_instance_from_3dm(int side,
                                  const std::vector<std::array<int, 3>>& triples) {
  if (side < 1) throw InputError("triple system needs a positive side size");
  std::vector<std::string> buyers, stores, couriers;
  for (int i = 1; i <= side; ++i) {
    buyers.push_back("b" + std::to_string(i));
    stores.push_back("s" + std::to_string(i));
    couriers.push_back("d" + std::to_string(i));
  }
  RatGrid valuation(side, side);
  for (int b = 0; b < side; ++b)
    for (int s = 0; s < side; ++s) valuation(b, s) = 1;
  std::vector<RatGrid> cost(static_cast<size_t>(side), RatGrid(side, side));
  for (auto& slice : cost)
    for (int b = 0; b < side; ++b)
      for (int s = 0; s < side; ++s) slice(b, s) = 1;
  for (const auto& triple : triples) {
    auto [b, s, d] = triple;
    if (b < 0 || b >= side || s < 0 || s >= side || d < 0 || d >= side)
      throw InputError("triple index outside the side size");
    cost[static_cast<size_t>(d)](b, s) = 0;
  }
  return Market(std::move(buyers), std::move(stores), std::move(couriers),
                std::move(valuation), std::move(cost));
}

}  // namespace triside
