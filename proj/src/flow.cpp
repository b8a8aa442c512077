#include "triside/flow.hpp"

#include <algorithm>
#include <sstream>

#include "triside/errors.hpp"

namespace triside {

SspEngine::SspEngine(int node_count) : out_(static_cast<size_t>(node_count)) {}

int SspEngine::add_arc(int from, int to, int capacity, Rat cost) {
  int index = static_cast<int>(slots_.size());
  out_[static_cast<size_t>(from)].push_back(index);
  slots_.push_back({to, capacity, cost});
  out_[static_cast<size_t>(to)].push_back(index + 1);
  slots_.push_back({from, 0, -cost});
  return index;
}

SspEngine::Push SspEngine::push_cheapest(int source, int sink, int max_units,
                                         bool only_if_negative) {
  const size_t nodes = out_.size();
  std::vector<bool> reached(nodes, false);
  std::vector<Rat> dist(nodes);
  std::vector<int> via(nodes, -1);  // arc used to enter the node
  reached[static_cast<size_t>(source)] = true;

  // Bellman-Ford over residual arcs; strict improvement keeps the chosen
  // tree stable for a fixed arc order.
  bool changed = true;
  size_t rounds = 0;
  while (changed) {
    if (++rounds > nodes + 1)
      throw InternalError("negative cycle in flow network");
    changed = false;
    for (size_t node = 0; node < nodes; ++node) {
      if (!reached[node]) continue;
      for (int arc : out_[node]) {
        const Slot& slot = slots_[static_cast<size_t>(arc)];
        if (slot.capacity <= 0) continue;
        Rat candidate = dist[node] + slot.cost;
        size_t to = static_cast<size_t>(slot.to);
        if (!reached[to] || candidate < dist[to]) {
          reached[to] = true;
          dist[to] = candidate;
          via[to] = arc;
          changed = true;
        }
      }
    }
  }

  if (!reached[static_cast<size_t>(sink)]) return {};
  if (only_if_negative && dist[static_cast<size_t>(sink)] >= 0)
    return {0, dist[static_cast<size_t>(sink)]};

  int bottleneck = max_units;
  for (int node = sink; node != source;) {
    const int arc = via[static_cast<size_t>(node)];
    bottleneck = std::min(bottleneck, slots_[static_cast<size_t>(arc)].capacity);
    node = slots_[static_cast<size_t>(arc ^ 1)].to;
  }
  for (int node = sink; node != source;) {
    const int arc = via[static_cast<size_t>(node)];
    slots_[static_cast<size_t>(arc)].capacity -= bottleneck;
    slots_[static_cast<size_t>(arc ^ 1)].capacity += bottleneck;
    node = slots_[static_cast<size_t>(arc ^ 1)].to;
  }
  return {bottleneck, dist[static_cast<size_t>(sink)]};
}

int SspEngine::flow_on(int forward_arc) const {
  return slots_[static_cast<size_t>(forward_arc ^ 1)].capacity;
}

FlowNetwork::FlowNetwork(int node_count, int source, int sink)
    : node_count_(node_count), source_(source), sink_(sink) {
  if (node_count < 2 || source < 0 || source >= node_count || sink < 0 ||
      sink >= node_count || source == sink)
    throw InputError("flow network needs distinct source and sink nodes");
}

int FlowNetwork::add_arc(int from, int to, int capacity, Rat cost) {
  if (from < 0 || from >= node_count_ || to < 0 || to >= node_count_)
    throw InputError("flow arc endpoint out of range");
  if (from == to) throw InputError("flow arc may not be a self-loop");
  if (to == source_) throw InputError("flow arc may not enter the source");
  if (from == sink_) throw InputError("flow arc may not leave the sink");
  if (capacity < 0) throw InputError("flow arc capacity may not be negative");
  arcs_.push_back({from, to, capacity, std::move(cost)});
  return static_cast<int>(arcs_.size()) - 1;
}

std::optional<FlowResult> min_cost_flow(const FlowNetwork& network, int supply) {
  if (supply < 0) throw InputError("flow supply may not be negative");
  SspEngine engine(network.node_count());
  std::vector<int> forward;
  forward.reserve(network.arcs().size());
  for (const auto& arc : network.arcs())
    forward.push_back(engine.add_arc(arc.from, arc.to, arc.capacity, arc.cost));

  int remaining = supply;
  Rat cost = 0;
  while (remaining > 0) {
    auto push = engine.push_cheapest(network.source(), network.sink(), remaining);
    if (push.units == 0) return std::nullopt;
    cost += push.unit_cost * push.units;
    remaining -= push.units;
  }

  FlowResult result;
  result.cost = std::move(cost);
  result.arc_flow.reserve(forward.size());
  for (int arc : forward) result.arc_flow.push_back(engine.flow_on(arc));
  return result;
}

std::string debug_dot(const FlowNetwork& network) {
  std::ostringstream out;
  out << "digraph flow {\n";
  out << "  // source " << network.source() << ", sink " << network.sink() << "\n";
  for (const auto& arc : network.arcs())
    out << "  " << arc.from << " -> " << arc.to << " [label=\"cap " << arc.capacity
        << " cost " << rat_to_string(arc.cost) << "\"];\n";
  out << "}\n";
  return out.str();
}

}  // namespace triside
