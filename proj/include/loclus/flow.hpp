// Copyright 2026 The loclus Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LOCLUS_FLOW_HPP_
#define LOCLUS_FLOW_HPP_

#include <cstdint>
#include <functional>
#include <vector>

#include "loclus/graph.hpp"

namespace loclus {

/// Directed flow network with integer capacities and paired reverse arcs.
/// Node 0.. are caller-defined; source and sink are fixed at construction.
/// Arcs into the source and out of the sink are rejected.
///
/// max_flow() runs a blocking-flow (level graph + DFS) solver and returns
/// the exact max-flow value together with the canonical minimal source
/// side (the source-reachable set of the final residual network). The
/// flow-equals-cut certificate is rechecked on every invocation and a
/// violation throws std::logic_error.
///
/// A materializer callback, when installed, is invoked the first time the
/// search reaches a node, and may append that node's outgoing arcs (and
/// fresh nodes) on the fly. Unreached nodes are never materialized, which
/// keeps strongly local solves strongly local.
class FlowNetwork {
 public:
  FlowNetwork(std::size_t node_count, int source, int sink);

  int add_node();
  std::size_t node_count() const { return heads_.size(); }
  std::size_t arc_count() const { return to_.size(); }
  int source() const { return source_; }
  int sink() const { return sink_; }

  /// Adds the arc pair (from->to with `cap`, to->from with `reverse_cap`).
  /// Use reverse_cap == cap for an undirected edge.
  void add_arc(int from, int to, std::int64_t cap, std::int64_t reverse_cap = 0);

  void set_materializer(std::function<void(FlowNetwork&, int)> fn) {
    materialize_ = std::move(fn);
  }

  /// True once the search has reached (and materialized) the node.
  bool reached(int node) const { return reached_[node] != 0; }

  struct Result {
    std::int64_t value = 0;
    std::vector<int> source_side;     // sorted, includes the source node
    std::size_t reached_nodes = 0;    // nodes ever materialized/visited
  };

  Result max_flow();

 private:
  bool bfs_levels();
  std::int64_t dfs_augment(int u, std::int64_t limit);
  void reach(int u);

  std::vector<std::vector<std::uint32_t>> heads_;  // per-node arc ids
  std::vector<int> to_;
  std::vector<std::int64_t> cap_;    // residual capacity
  std::vector<std::int64_t> cap0_;   // original capacity
  std::vector<int> level_;
  std::vector<std::uint32_t> iter_;
  std::vector<std::uint8_t> reached_;
  std::size_t reached_count_ = 0;
  int source_;
  int sink_;
  std::function<void(FlowNetwork&, int)> materialize_;
};

/// One cluster-improvement outcome: the improved cluster, how many
/// max-flow rounds ran, and the strictly decreasing conductance trace
/// (input first, final entry equals the output's conductance).
struct ImproveResult {
  Cluster cluster;
  int iterations = 0;
  std::vector<double> conductance_trace;
  bool complemented = false;   // input exceeded half the volume; improved
                               // the complement instead
  std::size_t touched = 0;     // distinct graph vertices the solver visited
};

/// Max-flow Quotient-cut Improvement: returns the subset of a's members
/// with the minimum conductance over all nonempty subsets, by parametric
/// max-flow (Dinkelbach iteration over the quotient cut(S)/vol(S)).
ImproveResult mqi(const Graph& g, const Cluster& a);

/// FlowImprove: minimizes cut(S) / (vol(S∩A) - theta*vol(S\A)) with
/// theta = vol(A)/vol(complement) over all S, via max-flow on an augmented
/// network spanning the whole graph. Output conductance never exceeds the
/// input's.
ImproveResult flow_improve(const Graph& g, const Cluster& a);

/// SimpleLocal: FlowImprove's objective with the penalty strengthened to
/// theta + delta, solved strongly locally (each max-flow round touches
/// only the neighborhood the flow actually reaches). delta == 0 reproduces
/// flow_improve exactly.
ImproveResult simple_local(const Graph& g, const Cluster& a, double delta);

}  // namespace loclus

#endif  // LOCLUS_FLOW_HPP_
