#include "triside/matching.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "triside/errors.hpp"
#include "triside/flow.hpp"

namespace triside {

namespace {

int index_of(const std::vector<std::string>& ids, const std::string& id,
             const char* side) {
  for (size_t i = 0; i < ids.size(); ++i)
    if (ids[i] == id) return static_cast<int>(i);
  throw InputError(std::string("unknown ") + side + " node id \"" + id + "\"");
}

}  // namespace

WeightedBipartiteGraph::WeightedBipartiteGraph(std::vector<std::string> left,
                                               std::vector<std::string> right)
    : left_(std::move(left)), right_(std::move(right)) {
  auto check_unique = [](const std::vector<std::string>& ids, const char* side) {
    std::unordered_set<std::string> seen;
    for (const std::string& id : ids)
      if (!seen.insert(id).second)
        throw InputError(std::string("duplicate ") + side + " node id \"" + id + "\"");
  };
  check_unique(left_, "left");
  check_unique(right_, "right");
}

void WeightedBipartiteGraph::add_edge(const std::string& left, const std::string& right,
                                      Rat weight) {
  int li = left_index(left), ri = right_index(right);
  for (const BipartiteEdge& edge : edges_)
    if (edge.left == li && edge.right == ri)
      throw InputError("duplicate edge (" + left + ", " + right + ")");
  edges_.push_back({li, ri, std::move(weight)});
}

int WeightedBipartiteGraph::left_index(const std::string& id) const {
  return index_of(left_, id, "left");
}

int WeightedBipartiteGraph::right_index(const std::string& id) const {
  return index_of(right_, id, "right");
}

namespace {

// Shared source/sink layout for bipartite runs: node 0 is the source, then
// left nodes, then right nodes, then the sink.
struct BipartiteFlow {
  SspEngine engine;
  int left_count, right_count;
  std::vector<int> edge_arcs;  // engine arc per graph edge, -1 if skipped

  BipartiteFlow(int lc, int rc) : engine(lc + rc + 2), left_count(lc), right_count(rc) {}

  int source() const { return 0; }
  int left_node(int i) const { return 1 + i; }
  int right_node(int j) const { return 1 + left_count + j; }
  int sink() const { return 1 + left_count + right_count; }

  MatchingResult harvest(const std::vector<BipartiteEdge>& edges, Rat total) const {
    MatchingResult result;
    result.total = std::move(total);
    for (size_t e = 0; e < edges.size(); ++e)
      if (edge_arcs[e] >= 0 && engine.flow_on(edge_arcs[e]) > 0)
        result.edges.emplace_back(edges[e].left, edges[e].right);
    std::sort(result.edges.begin(), result.edges.end());
    return result;
  }
};

void check_edges(int left_count, int right_count, const std::vector<BipartiteEdge>& edges) {
  for (const BipartiteEdge& edge : edges)
    if (edge.left < 0 || edge.left >= left_count || edge.right < 0 ||
        edge.right >= right_count)
      throw InputError("bipartite edge endpoint out of range");
}

}  // namespace

MatchingResult max_weight_matching_core(int left_count, int right_count,
                                        const std::vector<BipartiteEdge>& edges) {
  check_edges(left_count, right_count, edges);
  BipartiteFlow net(left_count, right_count);
  for (int i = 0; i < left_count; ++i)
    net.engine.add_arc(net.source(), net.left_node(i), 1, Rat(0));
  net.edge_arcs.assign(edges.size(), -1);
  for (size_t e = 0; e < edges.size(); ++e) {
    if (edges[e].weight < 0) continue;  // never part of a maximum matching
    net.edge_arcs[e] =
        net.engine.add_arc(net.left_node(edges[e].left), net.right_node(edges[e].right),
                           1, Rat(-edges[e].weight));
  }
  for (int j = 0; j < right_count; ++j)
    net.engine.add_arc(net.right_node(j), net.sink(), 1, Rat(0));

  // Path costs are nondecreasing across pushes, so stop as soon as another
  // matched edge would not strictly increase total weight; this also keeps
  // the matching as small as possible. Declining the nonnegative path (not
  // taking it) is essential: the harvested flow must be the matching whose
  // weight was accumulated.
  Rat total = 0;
  while (true) {
    auto push =
        net.engine.push_cheapest(net.source(), net.sink(), 1, /*only_if_negative=*/true);
    if (push.units == 0) break;
    total -= push.unit_cost;
  }
  return net.harvest(edges, std::move(total));
}

MatchingResult max_weight_matching(const WeightedBipartiteGraph& graph) {
  return max_weight_matching_core(static_cast<int>(graph.left_ids().size()),
                                  static_cast<int>(graph.right_ids().size()),
                                  graph.edges());
}

std::optional<MatchingResult> min_cost_cover_core(int left_count, int right_count,
                                                  const std::vector<BipartiteEdge>& edges,
                                                  const std::vector<int>& targets,
                                                  int excluded_right) {
  check_edges(left_count, right_count, edges);
  std::vector<bool> is_target(static_cast<size_t>(left_count), false);
  for (int t : targets) {
    if (t < 0 || t >= left_count) throw InputError("cover target out of range");
    if (is_target[static_cast<size_t>(t)]) throw InputError("duplicate cover target");
    is_target[static_cast<size_t>(t)] = true;
  }
  if (excluded_right < -1 || excluded_right >= right_count)
    throw InputError("excluded right node out of range");

  BipartiteFlow net(left_count, right_count);
  for (int t : targets) net.engine.add_arc(net.source(), net.left_node(t), 1, Rat(0));
  net.edge_arcs.assign(edges.size(), -1);
  for (size_t e = 0; e < edges.size(); ++e) {
    if (!is_target[static_cast<size_t>(edges[e].left)]) continue;
    if (edges[e].right == excluded_right) continue;
    net.edge_arcs[e] = net.engine.add_arc(net.left_node(edges[e].left),
                                          net.right_node(edges[e].right), 1,
                                          Rat(edges[e].weight));
  }
  for (int j = 0; j < right_count; ++j) {
    if (j == excluded_right) continue;
    net.engine.add_arc(net.right_node(j), net.sink(), 1, Rat(0));
  }

  Rat total = 0;
  for (size_t sent = 0; sent < targets.size();) {
    auto push = net.engine.push_cheapest(net.source(), net.sink(),
                                         static_cast<int>(targets.size() - sent));
    if (push.units == 0) return std::nullopt;
    total += push.unit_cost * push.units;
    sent += static_cast<size_t>(push.units);
  }
  return net.harvest(edges, std::move(total));
}

std::optional<MatchingResult> min_cost_cover(const WeightedBipartiteGraph& graph,
                                             const std::vector<std::string>& targets,
                                             const std::optional<std::string>& excluded_right) {
  std::vector<int> target_indices;
  target_indices.reserve(targets.size());
  for (const std::string& id : targets) target_indices.push_back(graph.left_index(id));
  int excluded = excluded_right ? graph.right_index(*excluded_right) : -1;
  return min_cost_cover_core(static_cast<int>(graph.left_ids().size()),
                             static_cast<int>(graph.right_ids().size()), graph.edges(),
                             target_indices, excluded);
}

std::optional<Rat> min_cost_cover_all_but_one_core(int left_count, int right_count,
                                                   const std::vector<BipartiteEdge>& edges,
                                                   const std::vector<int>& targets,
                                                   int excluded_right) {
  std::optional<Rat> best;
  for (size_t drop = 0; drop < targets.size(); ++drop) {
    std::vector<int> kept;
    kept.reserve(targets.size() - 1);
    for (size_t i = 0; i < targets.size(); ++i)
      if (i != drop) kept.push_back(targets[i]);
    auto covered =
        min_cost_cover_core(left_count, right_count, edges, kept, excluded_right);
    if (covered && (!best || covered->total < *best)) best = covered->total;
  }
  return best;
}

std::optional<Rat> min_cost_cover_all_but_one(const WeightedBipartiteGraph& graph,
                                              const std::vector<std::string>& targets,
                                              const std::string& excluded_right) {
  std::vector<int> target_indices;
  target_indices.reserve(targets.size());
  for (const std::string& id : targets) target_indices.push_back(graph.left_index(id));
  return min_cost_cover_all_but_one_core(static_cast<int>(graph.left_ids().size()),
                                         static_cast<int>(graph.right_ids().size()),
                                         graph.edges(), target_indices,
                                         graph.right_index(excluded_right));
}

WalrasianResult walrasian_two_sided(int buyer_count, int item_count,
                                    const RatGrid& value) {
  if (value.rows() != buyer_count || value.cols() != item_count)
    throw InputError("value grid does not match buyer/item counts");

  auto edges_without = [&](int dropped_buyer) {
    std::vector<BipartiteEdge> edges;
    for (int b = 0; b < buyer_count; ++b) {
      if (b == dropped_buyer) continue;
      for (int j = 0; j < item_count; ++j)
        if (value(b, j) >= 0) edges.push_back({b, j, value(b, j)});
    }
    return edges;
  };

  MatchingResult full = max_weight_matching_core(buyer_count, item_count, edges_without(-1));

  WalrasianResult result;
  result.matching_weight = full.total;
  result.buyer_item.assign(static_cast<size_t>(buyer_count), -1);
  result.prices.assign(static_cast<size_t>(item_count), Rat(0));
  for (const auto& [b, j] : full.edges) result.buyer_item[static_cast<size_t>(b)] = j;

  // Each matched buyer keeps her marginal contribution; the item's price is
  // the remainder of its value. Unmatched buyers contribute nothing, and
  // items nobody buys stay free.
  for (const auto& [b, j] : full.edges) {
    MatchingResult rest = max_weight_matching_core(buyer_count, item_count, edges_without(b));
    Rat buyer_share = full.total - rest.total;
    result.prices[static_cast<size_t>(j)] = value(b, j) - buyer_share;
  }
  return result;
}

}  // namespace triside
