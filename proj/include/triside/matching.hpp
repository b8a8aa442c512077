#pragma once

#include <optional>
#include <string>
#include <vector>

#include "triside/rational.hpp"

namespace triside {

// Edge referenced by node indices; the index-based cores below are what the
// rest of the library builds on.
struct BipartiteEdge {
  int left = -1;
  int right = -1;
  Rat weight;
};

// Sparse weighted bipartite graph over opaque node ids. A missing edge is
// absent, not weight zero.
class WeightedBipartiteGraph {
 public:
  WeightedBipartiteGraph(std::vector<std::string> left, std::vector<std::string> right);

  // Duplicate edges and unknown ids are InputErrors.
  void add_edge(const std::string& left, const std::string& right, Rat weight);

  const std::vector<std::string>& left_ids() const { return left_; }
  const std::vector<std::string>& right_ids() const { return right_; }
  const std::vector<BipartiteEdge>& edges() const { return edges_; }

  int left_index(const std::string& id) const;
  int right_index(const std::string& id) const;

 private:
  std::vector<std::string> left_, right_;
  std::vector<BipartiteEdge> edges_;
};

struct MatchingResult {
  std::vector<std::pair<int, int>> edges;  // matched (left, right) index pairs
  Rat total;                               // summed weight (or cost)
};

// Maximum-weight matching over all partial matchings: vertices may stay
// unmatched, so edges with negative weight are never used and the empty
// matching is always a candidate. Among maximum-weight matchings one with
// the fewest edges is returned.
MatchingResult max_weight_matching_core(int left_count, int right_count,
                                        const std::vector<BipartiteEdge>& edges);
MatchingResult max_weight_matching(const WeightedBipartiteGraph& graph);

// Minimum-cost matching that covers every target on the left, optionally
// with one right node excluded from use. Infeasibility (not enough reachable
// partners) is a value, not an error.
std::optional<MatchingResult> min_cost_cover_core(int left_count, int right_count,
                                                  const std::vector<BipartiteEdge>& edges,
                                                  const std::vector<int>& targets,
                                                  int excluded_right = -1);
std::optional<MatchingResult> min_cost_cover(
    const WeightedBipartiteGraph& graph, const std::vector<std::string>& targets,
    const std::optional<std::string>& excluded_right = std::nullopt);

// Cheapest way to cover all targets except one (the dropped target is chosen
// to minimize cost) while the given right node is excluded. nullopt when no
// choice of dropped target is feasible.
std::optional<Rat> min_cost_cover_all_but_one_core(int left_count, int right_count,
                                                   const std::vector<BipartiteEdge>& edges,
                                                   const std::vector<int>& targets,
                                                   int excluded_right);
std::optional<Rat> min_cost_cover_all_but_one(const WeightedBipartiteGraph& graph,
                                              const std::vector<std::string>& targets,
                                              const std::string& excluded_right);

struct WalrasianResult {
  std::vector<int> buyer_item;  // item matched to each buyer, -1 when unmatched
  std::vector<Rat> prices;      // per item; items nobody buys are priced 0
  Rat matching_weight;
};

// Buyer-optimal (pointwise minimum) market-clearing prices for a unit-demand
// two-sided market, together with an efficient matching. Every matched buyer
// weakly prefers her item at these prices over every alternative and over
// not buying; every unmatched buyer prefers not buying. Values may be
// negative; such pairs simply never trade.
//
// The minimum clearing price of an item equals what its buyer pays when each
// buyer keeps exactly her marginal contribution to the maximum matching
// weight, which is how the prices are computed here.
WalrasianResult walrasian_two_sided(int buyer_count, int item_count,
                                    const RatGrid& value);

}  // namespace triside
