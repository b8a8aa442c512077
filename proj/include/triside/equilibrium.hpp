#pragma once

#include <optional>
#include <string>
#include <vector>

#include "triside/market.hpp"

namespace triside {

// Everything a verifier can complain about. The verifiers report every
// violated condition, not just the first.
enum class Condition {
  BuyerBestResponse,         // "buyer-br"
  BuyerMinTip,               // "buyer-min-tip"
  CourierBestResponse,       // "courier-br"
  UnsoldPrice,               // "unsold-price"
  UndeliveredCompensation,   // "undelivered-compensation"
  UndeliveredTip,            // "undelivered-tip"
  InfeasibleAllocation,      // "infeasible-allocation"
};

const char* condition_tag(Condition condition);

struct Violation {
  Condition condition;
  std::string subject;  // which agent or pair
  std::string witness;  // the numbers that break the condition
};

struct Verdict {
  bool ok = false;
  std::vector<Violation> violations;
};

enum class Mode { WithTip, WithoutTip };

const char* mode_tag(Mode mode);
std::optional<Mode> mode_from_tag(const std::string& tag);

// A full claimed equilibrium: prices plus allocation. market_clearing=false
// relaxes the conditions that force unsold stores and undelivered orders to
// carry no price, compensation or tip.
struct EquilibriumCertificate {
  PriceSystem prices;
  Allocation allocation;
  Mode mode = Mode::WithTip;
  bool market_clearing = true;

  friend bool operator==(const EquilibriumCertificate&, const EquilibriumCertificate&) = default;
};

// Checks the tip-free equilibrium conditions: every courier delivers a
// utility-maximizing order under the compensations (or nothing, when nothing
// is worthwhile), every buyer buys a utility-maximizing store under the
// prices (or nothing), and under market clearing unsold stores cost exactly
// their store cost while undelivered orders pay nothing. Tips must be all
// zero; nonzero tips are an InputError, not a violation.
Verdict verify_without_tip(const Market& market, const PriceSystem& prices,
                           const Allocation& allocation, bool market_clearing);

// Checks the tipped equilibrium conditions. Couriers respond to compensation
// plus tip. Buyers anticipate, for every store, the least tip that would get
// the order delivered given everyone else's standing tips, and best-respond
// to price plus that tip; an assigned buyer must pay exactly her least tip.
// Market clearing additionally forces tips on undelivered orders to zero.
Verdict verify_with_tip(const Market& market, const PriceSystem& prices,
                        const Allocation& allocation, bool market_clearing);

// Dispatches on the certificate's mode.
Verdict verify(const Market& market, const EquilibriumCertificate& certificate);

// Reinterprets a verified tip-free certificate as a tipped one with zero
// tips. Throws InputError if the input does not verify in its own mode;
// always returns a verified certificate.
EquilibriumCertificate lift_without_to_with(const Market& market,
                                            const EquilibriumCertificate& certificate);

// Folds the tips of a verified tipped certificate into prices and
// compensations: each delivered order's tip moves onto its store price and
// its courier compensation. The allocation is unchanged and the result
// verifies with zero tips. Tips on undelivered orders cannot be folded and
// are an InputError (they are only possible without market clearing).
EquilibriumCertificate to_zero_tip(const Market& market,
                                   const EquilibriumCertificate& certificate);

// Decides whether some price system turns this allocation into a tipped
// market-clearing equilibrium, and builds one if so. The test only depends
// on the delivered order set; when the given courier assignment is not a
// cheapest way to deliver those orders, no prices can support it as-is and
// the certificate reassigns couriers to a cheapest cover of the same orders.
// Infeasible allocations are an InputError.
std::optional<EquilibriumCertificate> supports_equilibrium(const Market& market,
                                                           const Allocation& allocation);

// The cheap decision behind supports_equilibrium, keyed on the delivered
// order set alone. Exposed for exhaustive searches that probe many courier
// assignments over the same orders.
bool supportable_order_set(const Market& market, const std::vector<Order>& omega);

// Composes a buyer-side clearing outcome with a courier plan. Succeeds
// whenever the buyer-side matching needs no more couriers than exist;
// otherwise returns nothing (a tip-free equilibrium may genuinely not
// exist).
std::optional<EquilibriumCertificate> construct_without_tip(const Market& market);

struct WithTipOptions {
  // Search all order sets of full courier size instead of picking greedily
  // by order surplus. Exhaustive and only meant for small markets.
  bool exhaustive_order_search = false;
};

// Always returns a verified tipped market-clearing equilibrium: the lifted
// tip-free construction when that exists, and otherwise a full-courier-size
// order set served by a courier plan, with each sold store priced at its
// buyer's valuation.
EquilibriumCertificate construct_with_tip(const Market& market,
                                          const WithTipOptions& options = {});

// The single most valuable trade, sold at the buyer's valuation with every
// other store priced out of reach. Verifies without market clearing and its
// welfare is at least the optimum divided by the smallest side of the
// market. When no trade has positive surplus the empty certificate is
// returned.
EquilibriumCertificate best_single_trade_equilibrium(const Market& market);

}  // namespace triside
