#pragma once

#include <array>
#include <optional>
#include <vector>

#include "triside/equilibrium.hpp"
#include "triside/market.hpp"

namespace triside {

// Recognized shapes of the delivery cost tensor. A tensor is courier-store
// decomposable when it splits into a per-order part shared by all couriers
// plus a part depending only on the courier and the store; courier-buyer is
// the mirror image. Single-mindedness is about valuations instead: each
// buyer values at most one store positively.
enum class CostKind { CourierStore, CourierBuyer, SingleMindedBuyers, Unstructured };

const char* cost_kind_tag(CostKind kind);

struct CostStructure {
  CostKind kind = CostKind::Unstructured;
  // For the two decomposable kinds: shared(b, s) is the cheapest courier's
  // cost for the order, and courier_part[d] is indexed by store
  // (CourierStore) or by buyer (CourierBuyer). Adding the two reproduces the
  // cost tensor exactly. Empty otherwise.
  RatGrid shared;
  std::vector<std::vector<Rat>> courier_part;
};

struct OptResult {
  Rat welfare;
  Allocation allocation;
};

// Exhaustive searches refuse to run above this many agents per side unless
// the caller raises the cap explicitly.
inline constexpr int kDefaultBruteForceCap = 6;

// Best welfare over every feasible allocation, by full enumeration. Ties
// prefer the lexicographically smallest sorted trade list, so the empty
// allocation wins when nothing has positive welfare. Throws CapError above
// the cap.
OptResult optimal_welfare_bruteforce(const Market& market,
                                     int cap = kDefaultBruteForceCap);

// Tries courier-store, then courier-buyer, then single-minded valuations.
CostStructure detect_cost_structure(const Market& market);

// Polynomial welfare optimum for a decomposable cost tensor: a single
// min-cost-flow network expresses buyer choice, order cost and courier cost,
// and sweeping the flow value over every possible trade count finds the
// best. Requires a CourierStore or CourierBuyer structure.
OptResult optimal_welfare_flow(const Market& market, const CostStructure& structure);

// Polynomial welfare optimum when every buyer wants at most one store;
// the one wanted order per buyer becomes a network vertex. Throws InputError
// when some buyer values two stores.
OptResult optimal_welfare_single_minded(const Market& market);

// Welfare-optimal allocation of a structured market, priced into a tipped
// market-clearing equilibrium. For these markets the welfare optimum is
// always supportable; failure to support it is an InternalError.
EquilibriumCertificate efficient_equilibrium_structured(const Market& market);

struct OptimalEquilibrium {
  Rat welfare;
  EquilibriumCertificate certificate;
};

// Best welfare over every supportable allocation (the empty allocation
// included), by full enumeration under the cap. Returns nothing only if no
// allocation at all is supportable.
std::optional<OptimalEquilibrium> optimal_equilibrium_welfare_bruteforce(
    const Market& market, int cap = kDefaultBruteForceCap);

// The classic reduction from three-dimensional matching: triples are
// (buyer, store, courier) index triples over three sides of equal size, all
// valuations are 1, listed triples cost 0 to deliver and everything else
// costs 1. The optimal equilibrium welfare equals `side` exactly when the
// triple system has a perfect matching.
Market hardness_instance_from_3dm(int side,
                                  const std::vector<std::array<int, 3>>& triples);

}  // namespace triside
