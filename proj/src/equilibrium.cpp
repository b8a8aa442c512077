#include "triside/equilibrium.hpp"

#include <algorithm>
#include <utility>

#include "triside/courier_plan.hpp"
#include "triside/errors.hpp"
#include "triside/matching.hpp"
#include "triside/tips.hpp"

namespace triside {

const char* condition_tag(Condition condition) {
  switch (condition) {
    case Condition::BuyerBestResponse: return "buyer-br";
    case Condition::BuyerMinTip: return "buyer-min-tip";
    case Condition::CourierBestResponse: return "courier-br";
    case Condition::UnsoldPrice: return "unsold-price";
    case Condition::UndeliveredCompensation: return "undelivered-compensation";
    case Condition::UndeliveredTip: return "undelivered-tip";
    case Condition::InfeasibleAllocation: return "infeasible-allocation";
  }
  return "?";
}

const char* mode_tag(Mode mode) {
  return mode == Mode::WithTip ? "with-tip" : "without-tip";
}

std::optional<Mode> mode_from_tag(const std::string& tag) {
  if (tag == "with-tip") return Mode::WithTip;
  if (tag == "without-tip") return Mode::WithoutTip;
  return std::nullopt;
}

namespace {

struct AllocationView {
  std::vector<int> store_of_buyer;      // -1 when the buyer buys nothing
  std::vector<Order> order_of_courier;  // buyer == -1 when the courier is idle
  std::vector<bool> store_sold;
  std::vector<bool> delivered;  // buyer-major

  bool is_delivered(int buyer, int store, int num_stores) const {
    return delivered[static_cast<size_t>(buyer) * num_stores + store];
  }
};

AllocationView view_of(const Market& market, const Allocation& allocation) {
  AllocationView view;
  view.store_of_buyer.assign(static_cast<size_t>(market.num_buyers()), -1);
  view.order_of_courier.assign(static_cast<size_t>(market.num_couriers()), Order{});
  view.store_sold.assign(static_cast<size_t>(market.num_stores()), false);
  view.delivered.assign(static_cast<size_t>(market.num_buyers()) *
                            static_cast<size_t>(market.num_stores()),
                        false);
  for (const Trade& trade : allocation.trades) {
    view.store_of_buyer[static_cast<size_t>(trade.buyer)] = trade.store;
    view.order_of_courier[static_cast<size_t>(trade.courier)] = {trade.buyer, trade.store};
    view.store_sold[static_cast<size_t>(trade.store)] = true;
    view.delivered[static_cast<size_t>(trade.buyer) * market.num_stores() + trade.store] =
        true;
  }
  return view;
}

std::string pair_name(const Market& market, int buyer, int store) {
  return "(" + market.buyer_ids()[buyer] + ", " + market.store_ids()[store] + ")";
}

// Couriers respond to whatever the delivered side of an order pays in total:
// the compensation alone without tips, compensation plus tip with them.
void check_couriers(const Market& market, const RatGrid& offer,
                    const AllocationView& view, std::vector<Violation>& out) {
  for (int d = 0; d < market.num_couriers(); ++d) {
    Rat best = 0;
    int best_b = -1, best_s = -1;
    for (int b = 0; b < market.num_buyers(); ++b)
      for (int s = 0; s < market.num_stores(); ++s) {
        Rat utility = offer(b, s) - market.cost(d, b, s);
        if (utility > best) {
          best = utility;
          best_b = b;
          best_s = s;
        }
      }
    const std::string courier = market.courier_ids()[d];
    const Order own = view.order_of_courier[static_cast<size_t>(d)];
    if (own.buyer < 0) {
      if (best > 0)
        out.push_back({Condition::CourierBestResponse, "courier " + courier,
                       "idle but would earn " + rat_to_string(best) + " delivering " +
                           pair_name(market, best_b, best_s)});
      continue;
    }
    Rat mine = offer(own.buyer, own.store) - market.cost(d, own.buyer, own.store);
    if (mine < 0)
      out.push_back({Condition::CourierBestResponse, "courier " + courier,
                     "delivers " + pair_name(market, own.buyer, own.store) +
                         " at utility " + rat_to_string(mine)});
    else if (mine < best)
      out.push_back({Condition::CourierBestResponse, "courier " + courier,
                     "earns " + rat_to_string(mine) + " on " +
                         pair_name(market, own.buyer, own.store) + " but " +
                         rat_to_string(best) + " is available on " +
                         pair_name(market, best_b, best_s)});
  }
}

// Shared buyer-side walk. `perceived` holds what buying each store costs the
// buyer on top of its value: price alone without tips, price plus the least
// achievable tip with them.
void check_buyer_choice(const Market& market, int buyer,
                        const std::vector<Rat>& utility, const AllocationView& view,
                        std::vector<Violation>& out) {
  Rat best = 0;
  int best_s = -1;
  for (int s = 0; s < market.num_stores(); ++s)
    if (utility[static_cast<size_t>(s)] > best) {
      best = utility[static_cast<size_t>(s)];
      best_s = s;
    }
  const std::string name = "buyer " + market.buyer_ids()[buyer];
  int own = view.store_of_buyer[static_cast<size_t>(buyer)];
  if (own < 0) {
    if (best > 0)
      out.push_back({Condition::BuyerBestResponse, name,
                     "buys nothing but store " + market.store_ids()[best_s] +
                         " would yield " + rat_to_string(best)});
    return;
  }
  const Rat& mine = utility[static_cast<size_t>(own)];
  if (mine < 0)
    out.push_back({Condition::BuyerBestResponse, name,
                   "buys from " + market.store_ids()[own] + " at utility " +
                       rat_to_string(mine)});
  else if (mine < best)
    out.push_back({Condition::BuyerBestResponse, name,
                   "gets " + rat_to_string(mine) + " from " + market.store_ids()[own] +
                       " but " + rat_to_string(best) + " is available at " +
                       market.store_ids()[best_s]});
}

void check_clearing(const Market& market, const PriceSystem& prices,
                    const AllocationView& view, bool with_tips,
                    std::vector<Violation>& out) {
  for (int s = 0; s < market.num_stores(); ++s) {
    if (view.store_sold[static_cast<size_t>(s)]) continue;
    if (prices.purchase[static_cast<size_t>(s)] != market.store_cost(s))
      out.push_back({Condition::UnsoldPrice, "store " + market.store_ids()[s],
                     "unsold but priced " +
                         rat_to_string(prices.purchase[static_cast<size_t>(s)]) +
                         ", expected " + rat_to_string(market.store_cost(s))});
  }
  for (int b = 0; b < market.num_buyers(); ++b)
    for (int s = 0; s < market.num_stores(); ++s) {
      if (view.is_delivered(b, s, market.num_stores())) continue;
      if (prices.compensation(b, s) != 0)
        out.push_back({Condition::UndeliveredCompensation, "order " + pair_name(market, b, s),
                       "undelivered but compensated " +
                           rat_to_string(prices.compensation(b, s))});
      if (with_tips && prices.tip(b, s) != 0)
        out.push_back({Condition::UndeliveredTip, "order " + pair_name(market, b, s),
                       "undelivered but tipped " + rat_to_string(prices.tip(b, s))});
    }
}

}  // namespace

Verdict verify_without_tip(const Market& market, const PriceSystem& prices,
                           const Allocation& allocation, bool market_clearing) {
  check_price_system(market, prices);
  if (!prices.tip.all_zero())
    throw InputError("tip-free verification requires all tips to be zero");

  Verdict verdict;
  if (!validate_allocation(market, allocation)) {
    verdict.violations.push_back({Condition::InfeasibleAllocation, "allocation",
                                  "an agent appears in more than one trade"});
    return verdict;
  }
  const AllocationView view = view_of(market, allocation);

  check_couriers(market, prices.compensation, view, verdict.violations);

  std::vector<Rat> utility(static_cast<size_t>(market.num_stores()));
  for (int b = 0; b < market.num_buyers(); ++b) {
    for (int s = 0; s < market.num_stores(); ++s)
      utility[static_cast<size_t>(s)] =
          market.valuation(b, s) - prices.purchase[static_cast<size_t>(s)];
    check_buyer_choice(market, b, utility, view, verdict.violations);
  }

  if (market_clearing)
    check_clearing(market, prices, view, /*with_tips=*/false, verdict.violations);

  verdict.ok = verdict.violations.empty();
  return verdict;
}

Verdict verify_with_tip(const Market& market, const PriceSystem& prices,
                        const Allocation& allocation, bool market_clearing) {
  check_price_system(market, prices);

  Verdict verdict;
  if (!validate_allocation(market, allocation)) {
    verdict.violations.push_back({Condition::InfeasibleAllocation, "allocation",
                                  "an agent appears in more than one trade"});
    return verdict;
  }
  const AllocationView view = view_of(market, allocation);

  RatGrid offer = prices.compensation;
  for (int b = 0; b < market.num_buyers(); ++b)
    for (int s = 0; s < market.num_stores(); ++s) offer(b, s) += prices.tip(b, s);
  check_couriers(market, offer, view, verdict.violations);

  std::vector<Rat> utility(static_cast<size_t>(market.num_stores()));
  std::vector<Rat> least(static_cast<size_t>(market.num_stores()));
  for (int b = 0; b < market.num_buyers(); ++b) {
    for (int s = 0; s < market.num_stores(); ++s) {
      least[static_cast<size_t>(s)] =
          min_tip(market, prices.compensation, prices.tip, b, s);
      utility[static_cast<size_t>(s)] = market.valuation(b, s) -
                                        prices.purchase[static_cast<size_t>(s)] -
                                        least[static_cast<size_t>(s)];
    }
    check_buyer_choice(market, b, utility, view, verdict.violations);
    int own = view.store_of_buyer[static_cast<size_t>(b)];
    if (own >= 0 && prices.tip(b, own) != least[static_cast<size_t>(own)])
      verdict.violations.push_back(
          {Condition::BuyerMinTip, "buyer " + market.buyer_ids()[b],
           "tips " + rat_to_string(prices.tip(b, own)) + " on " +
               pair_name(market, b, own) + " but the least workable tip is " +
               rat_to_string(least[static_cast<size_t>(own)])});
  }

  if (market_clearing)
    check_clearing(market, prices, view, /*with_tips=*/true, verdict.violations);

  verdict.ok = verdict.violations.empty();
  return verdict;
}

Verdict verify(const Market& market, const EquilibriumCertificate& certificate) {
  if (certificate.mode == Mode::WithoutTip)
    return verify_without_tip(market, certificate.prices, certificate.allocation,
                              certificate.market_clearing);
  return verify_with_tip(market, certificate.prices, certificate.allocation,
                         certificate.market_clearing);
}

namespace {

void ensure_verified(const Market& market, const EquilibriumCertificate& certificate,
                     const char* who) {
  Verdict verdict = verify(market, certificate);
  if (verdict.ok) return;
  std::string message = std::string(who) + " produced a certificate that fails verification:";
  for (const Violation& violation : verdict.violations)
    message += std::string(" [") + condition_tag(violation.condition) + " " +
               violation.subject + ": " + violation.witness + "]";
  throw InternalError(message);
}

struct SupportProbe {
  std::vector<Rat> ceilings;
  TipMatrix least_tips;
  RatGrid net_value;  // valuation minus least tip, the buyer side sees this
  Rat delivered_weight;
  bool supportable = false;
};

// Assumes store costs have already been folded away.
SupportProbe probe_order_set(const Market& market, const std::vector<Order>& omega) {
  SupportProbe probe;
  probe.ceilings = max_courier_utilities(market, omega);
  probe.least_tips = equilibrium_min_tips(market, omega, probe.ceilings);
  probe.net_value = RatGrid(market.num_buyers(), market.num_stores());
  std::vector<BipartiteEdge> edges;
  edges.reserve(static_cast<size_t>(market.num_buyers()) * market.num_stores());
  for (int b = 0; b < market.num_buyers(); ++b)
    for (int s = 0; s < market.num_stores(); ++s) {
      probe.net_value(b, s) = market.valuation(b, s) - probe.least_tips(b, s);
      edges.push_back({b, s, probe.net_value(b, s)});
    }
  probe.delivered_weight = 0;
  for (const Order& order : omega)
    probe.delivered_weight += probe.net_value(order.buyer, order.store);
  MatchingResult best =
      max_weight_matching_core(market.num_buyers(), market.num_stores(), edges);
  // The delivered orders carry no tips, so their weight is plain valuation;
  // the allocation can be priced into an equilibrium exactly when no other
  // buyer-side matching beats it under the least-tip-adjusted values.
  probe.supportable = probe.delivered_weight == best.total;
  return probe;
}

Allocation allocation_from_plan(const CourierPlan& plan) {
  Allocation allocation;
  for (size_t d = 0; d < plan.assignment.size(); ++d) {
    int index = plan.assignment[d];
    if (index < 0) continue;
    const Order& order = plan.target_orders[static_cast<size_t>(index)];
    allocation.trades.push_back({order.buyer, order.store, static_cast<int>(d)});
  }
  allocation.canonicalize();
  return allocation;
}

}  // namespace

bool supportable_order_set(const Market& market, const std::vector<Order>& omega) {
  if (market.has_store_costs()) {
    auto [reduced, shift] = normalize_store_costs(market);
    (void)shift;
    return supportable_order_set(reduced, omega);
  }
  return probe_order_set(market, omega).supportable;
}

std::optional<EquilibriumCertificate> supports_equilibrium(const Market& market,
                                                           const Allocation& allocation) {
  if (!validate_allocation(market, allocation))
    throw InputError("cannot decide supportability of an infeasible allocation");
  if (market.has_store_costs()) {
    auto [reduced, shift] = normalize_store_costs(market);
    auto certificate = supports_equilibrium(reduced, allocation);
    if (!certificate) return std::nullopt;
    certificate->prices = shift.apply(certificate->prices);
    ensure_verified(market, *certificate, "supports_equilibrium");
    return certificate;
  }

  const std::vector<Order> omega = allocation.orders();
  SupportProbe probe = probe_order_set(market, omega);
  if (!probe.supportable) return std::nullopt;

  CourierPlan plan = build_courier_plan(market, omega);
  Rat given_cost = 0;
  for (const Trade& trade : allocation.trades)
    given_cost += market.cost(trade.courier, trade.buyer, trade.store);

  EquilibriumCertificate certificate;
  // The compensations only support cheapest courier assignments; any other
  // assignment admits no supporting prices at all, so those couriers are
  // reassigned to the plan's cover of the same orders.
  certificate.allocation = given_cost == plan.assignment_cost
                               ? allocation
                               : allocation_from_plan(plan);
  certificate.allocation.canonicalize();

  WalrasianResult clearing =
      walrasian_two_sided(market.num_buyers(), market.num_stores(), probe.net_value);
  certificate.prices = PriceSystem::zeros(market);
  certificate.prices.purchase = clearing.prices;
  certificate.prices.compensation = plan.compensation;
  certificate.mode = Mode::WithTip;
  certificate.market_clearing = true;
  ensure_verified(market, certificate, "supports_equilibrium");
  return certificate;
}

std::optional<EquilibriumCertificate> construct_without_tip(const Market& market) {
  if (market.has_store_costs()) {
    auto [reduced, shift] = normalize_store_costs(market);
    auto certificate = construct_without_tip(reduced);
    if (!certificate) return std::nullopt;
    certificate->prices = shift.apply(certificate->prices);
    ensure_verified(market, *certificate, "construct_without_tip");
    return certificate;
  }

  WalrasianResult clearing = walrasian_two_sided(
      market.num_buyers(), market.num_stores(), market.valuation_grid());
  std::vector<Order> omega;
  for (int b = 0; b < market.num_buyers(); ++b)
    if (clearing.buyer_item[static_cast<size_t>(b)] >= 0)
      omega.push_back({b, clearing.buyer_item[static_cast<size_t>(b)]});
  if (omega.size() > static_cast<size_t>(market.num_couriers())) return std::nullopt;

  CourierPlan plan = build_courier_plan(market, omega);
  EquilibriumCertificate certificate;
  certificate.allocation = allocation_from_plan(plan);
  certificate.prices = PriceSystem::zeros(market);
  certificate.prices.purchase = clearing.prices;
  certificate.prices.compensation = plan.compensation;
  certificate.mode = Mode::WithoutTip;
  certificate.market_clearing = true;
  ensure_verified(market, certificate, "construct_without_tip");
  return certificate;
}

namespace {

// Greedy order choice for the full-courier-size construction: highest
// surplus over the cheapest courier first, ties by declaration order.
std::vector<Order> pick_orders_greedy(const Market& market, int count) {
  struct Scored {
    Rat surplus;
    int buyer, store;
  };
  std::vector<Scored> scored;
  scored.reserve(static_cast<size_t>(market.num_buyers()) * market.num_stores());
  for (int b = 0; b < market.num_buyers(); ++b)
    for (int s = 0; s < market.num_stores(); ++s) {
      Rat cheapest = market.cost(0, b, s);
      for (int d = 1; d < market.num_couriers(); ++d)
        cheapest = std::min(cheapest, Rat(market.cost(d, b, s)));
      scored.push_back({market.valuation(b, s) - cheapest, b, s});
    }
  std::stable_sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
    return a.surplus > b.surplus;
  });
  std::vector<bool> buyer_used(market.num_buyers(), false);
  std::vector<bool> store_used(market.num_stores(), false);
  std::vector<Order> omega;
  for (const Scored& candidate : scored) {
    if (static_cast<int>(omega.size()) == count) break;
    if (buyer_used[candidate.buyer] || store_used[candidate.store]) continue;
    buyer_used[candidate.buyer] = true;
    store_used[candidate.store] = true;
    omega.push_back({candidate.buyer, candidate.store});
  }
  std::sort(omega.begin(), omega.end());
  return omega;
}

// Exhaustive order choice: best welfare of the resulting construction, which
// serves every chosen order via a cheapest cover. First maximum in
// lexicographic order wins.
std::vector<Order> pick_orders_exhaustive(const Market& market, int count) {
  std::vector<Order> best, current;
  std::optional<Rat> best_welfare;
  std::vector<bool> buyer_used(market.num_buyers(), false);
  std::vector<bool> store_used(market.num_stores(), false);

  auto consider = [&]() {
    std::vector<BipartiteEdge> edges;
    for (size_t o = 0; o < current.size(); ++o)
      for (int d = 0; d < market.num_couriers(); ++d)
        edges.push_back({static_cast<int>(o), d,
                         market.cost(d, current[o].buyer, current[o].store)});
    std::vector<int> targets(current.size());
    for (size_t i = 0; i < current.size(); ++i) targets[i] = static_cast<int>(i);
    auto cover = min_cost_cover_core(static_cast<int>(current.size()),
                                     market.num_couriers(), edges, targets);
    if (!cover) return;
    Rat value = -cover->total;
    for (const Order& order : current) value += market.valuation(order.buyer, order.store);
    if (!best_welfare || value > *best_welfare) {
      best_welfare = value;
      best = current;
    }
  };

  auto search = [&](auto&& self, int next_pair) -> void {
    if (static_cast<int>(current.size()) == count) {
      consider();
      return;
    }
    for (int p = next_pair; p < market.num_buyers() * market.num_stores(); ++p) {
      int b = p / market.num_stores(), s = p % market.num_stores();
      if (buyer_used[b] || store_used[s]) continue;
      buyer_used[b] = store_used[s] = true;
      current.push_back({b, s});
      self(self, p + 1);
      current.pop_back();
      buyer_used[b] = store_used[s] = false;
    }
  };
  search(search, 0);
  return best;
}

}  // namespace

EquilibriumCertificate construct_with_tip(const Market& market,
                                          const WithTipOptions& options) {
  if (market.has_store_costs()) {
    auto [reduced, shift] = normalize_store_costs(market);
    EquilibriumCertificate certificate = construct_with_tip(reduced, options);
    certificate.prices = shift.apply(certificate.prices);
    ensure_verified(market, certificate, "construct_with_tip");
    return certificate;
  }

  if (auto tip_free = construct_without_tip(market))
    return lift_without_to_with(market, *tip_free);

  // The tip-free route only fails when couriers are scarce; serve exactly as
  // many orders as there are couriers, priced so every buyer involved is
  // indifferent and nobody else can afford to outbid the standing plan.
  const int count = market.num_couriers();
  if (count >= std::min(market.num_buyers(), market.num_stores()))
    throw InternalError("tip-free construction failed without courier scarcity");
  std::vector<Order> omega = options.exhaustive_order_search
                                 ? pick_orders_exhaustive(market, count)
                                 : pick_orders_greedy(market, count);

  CourierPlan plan = build_courier_plan(market, omega);
  EquilibriumCertificate certificate;
  certificate.allocation = allocation_from_plan(plan);
  certificate.prices = PriceSystem::zeros(market);
  for (const Order& order : omega)
    certificate.prices.purchase[static_cast<size_t>(order.store)] =
        market.valuation(order.buyer, order.store);
  certificate.prices.compensation = plan.compensation;
  certificate.mode = Mode::WithTip;
  certificate.market_clearing = true;
  ensure_verified(market, certificate, "construct_with_tip");
  return certificate;
}

EquilibriumCertificate lift_without_to_with(const Market& market,
                                            const EquilibriumCertificate& certificate) {
  if (certificate.mode != Mode::WithoutTip)
    throw InputError("lift_without_to_with expects a without-tip certificate");
  Verdict verdict = verify(market, certificate);
  if (!verdict.ok)
    throw InputError("certificate does not verify as a tip-free equilibrium");
  EquilibriumCertificate lifted = certificate;
  lifted.mode = Mode::WithTip;
  // No tips are needed anywhere once the tip-free conditions hold.
  ensure_verified(market, lifted, "lift_without_to_with");
  return lifted;
}

EquilibriumCertificate to_zero_tip(const Market& market,
                                   const EquilibriumCertificate& certificate) {
  if (certificate.mode != Mode::WithTip)
    throw InputError("to_zero_tip expects a with-tip certificate");
  Verdict verdict = verify(market, certificate);
  if (!verdict.ok) throw InputError("certificate does not verify as a tipped equilibrium");

  const AllocationView view = view_of(market, certificate.allocation);
  for (int b = 0; b < market.num_buyers(); ++b)
    for (int s = 0; s < market.num_stores(); ++s)
      if (!view.is_delivered(b, s, market.num_stores()) &&
          certificate.prices.tip(b, s) != 0)
        throw InputError("tip on the undelivered order " + pair_name(market, b, s) +
                         " cannot be folded into prices");

  EquilibriumCertificate folded = certificate;
  for (const Trade& trade : certificate.allocation.trades) {
    const Rat& tip = certificate.prices.tip(trade.buyer, trade.store);
    folded.prices.purchase[static_cast<size_t>(trade.store)] += tip;
    folded.prices.compensation(trade.buyer, trade.store) += tip;
  }
  folded.prices.tip = RatGrid(market.num_buyers(), market.num_stores());
  ensure_verified(market, folded, "to_zero_tip");
  return folded;
}

EquilibriumCertificate best_single_trade_equilibrium(const Market& market) {
  if (market.has_store_costs()) {
    auto [reduced, shift] = normalize_store_costs(market);
    EquilibriumCertificate certificate = best_single_trade_equilibrium(reduced);
    certificate.prices = shift.apply(certificate.prices);
    ensure_verified(market, certificate, "best_single_trade_equilibrium");
    return certificate;
  }

  Rat best_surplus = 0;
  int best_b = -1, best_s = -1, best_d = -1;
  for (int b = 0; b < market.num_buyers(); ++b)
    for (int s = 0; s < market.num_stores(); ++s)
      for (int d = 0; d < market.num_couriers(); ++d) {
        Rat surplus = market.valuation(b, s) - market.cost(d, b, s);
        if (surplus > best_surplus) {
          best_surplus = surplus;
          best_b = b;
          best_s = s;
          best_d = d;
        }
      }

  EquilibriumCertificate certificate;
  certificate.prices = PriceSystem::zeros(market);
  certificate.mode = Mode::WithTip;
  certificate.market_clearing = false;
  if (best_b < 0) {
    // No trade has positive surplus; the empty outcome needs no prices.
    ensure_verified(market, certificate, "best_single_trade_equilibrium");
    return certificate;
  }

  // Sell the single best trade at the buyer's valuation and price every
  // other store out of everyone's reach.
  const Rat ceiling = market.max_valuation();
  for (int s = 0; s < market.num_stores(); ++s)
    certificate.prices.purchase[static_cast<size_t>(s)] = s == best_s
                                                              ? market.valuation(best_b, s)
                                                              : ceiling;
  certificate.prices.compensation(best_b, best_s) = market.cost(best_d, best_b, best_s);
  certificate.allocation.trades.push_back({best_b, best_s, best_d});
  ensure_verified(market, certificate, "best_single_trade_equilibrium");
  return certificate;
}

}  // namespace triside
