#pragma once

#include <optional>
#include <string>
#include <vector>

#include "triside/rational.hpp"

namespace triside {

// Residual-graph successive-shortest-path kernel shared by the flow and
// matching front ends. Costs are exact rationals; capacities are integers.
// Arcs live in pairs (forward at even index, reverse at odd), and shortest
// paths are found by Bellman-Ford with strict improvement in a fixed arc
// order, which keeps every result deterministic.
//
// Starting from the zero flow, each push follows a cheapest residual path,
// so after any number of pushes the current flow is a minimum-cost flow of
// its value. This requires the initial network to contain no negative-cost
// cycle; every network built in this library is acyclic, and the kernel
// throws InternalError if relaxation fails to settle.
class SspEngine {
 public:
  explicit SspEngine(int node_count);

  // Returns the forward arc index (even). Cost may be negative.
  int add_arc(int from, int to, int capacity, Rat cost);

  struct Push {
    int units = 0;  // zero when no residual path exists (or it was declined)
    Rat unit_cost;  // cost per unit along the chosen path
  };

  // Sends up to max_units along the cheapest residual source->sink path.
  // With only_if_negative set, a path of nonnegative unit cost is reported
  // but not taken (units stays 0), leaving the flow untouched.
  Push push_cheapest(int source, int sink, int max_units, bool only_if_negative = false);

  int flow_on(int forward_arc) const;

 private:
  struct Slot {
    int to = 0;
    int capacity = 0;  // residual
    Rat cost;
  };

  std::vector<Slot> slots_;
  std::vector<std::vector<int>> out_;
};

// Directed network with one source and one sink. Arc order is the order of
// add_arc calls and is part of the deterministic behaviour of the solvers.
class FlowNetwork {
 public:
  FlowNetwork(int node_count, int source, int sink);

  // Validates endpoints, rejects self-loops, arcs into the source, arcs out
  // of the sink and negative capacities. Returns the arc index.
  int add_arc(int from, int to, int capacity, Rat cost);

  int node_count() const { return node_count_; }
  int source() const { return source_; }
  int sink() const { return sink_; }

  struct Arc {
    int from, to, capacity;
    Rat cost;
  };
  const std::vector<Arc>& arcs() const { return arcs_; }

 private:
  int node_count_, source_, sink_;
  std::vector<Arc> arcs_;
};

struct FlowResult {
  std::vector<int> arc_flow;  // parallel to FlowNetwork::arcs()
  Rat cost;
};

// Exact minimum-cost flow of exactly `supply` units from source to sink.
// Returns nullopt when the network cannot carry that much flow.
std::optional<FlowResult> min_cost_flow(const FlowNetwork& network, int supply);

// Human-readable dump for troubleshooting. Format is unstable.
std::string debug_dot(const FlowNetwork& network);

}  // namespace triside
