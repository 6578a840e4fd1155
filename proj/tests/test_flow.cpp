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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "loclus/flow.hpp"
#include "loclus/graph.hpp"
#include "loclus/pipelines.hpp"
#include "loclus/rng.hpp"
#include "oracles.hpp"

using namespace loclus;
namespace lt = loclus::testing;

namespace {

Graph two_cliques_bridge(std::size_t c) {
  std::vector<Edge> edges;
  for (VertexId a = 0; a < c; ++a) {
    for (VertexId b = a + 1; b < c; ++b) {
      edges.push_back({a, b});
      edges.push_back({static_cast<VertexId>(a + c),
                       static_cast<VertexId>(b + c)});
    }
  }
  edges.push_back({0, static_cast<VertexId>(c)});
  return Graph::from_edges(edges);
}

// exact conductance comparison for unit-weight graphs
bool phi_not_worse(const Graph& g, const Cluster& out, const Cluster& in) {
  const auto den = [&](const Cluster& c) {
    return std::llround(std::min(c.volume(), g.total_volume() - c.volume()));
  };
  return static_cast<__int128>(std::llround(out.cut())) * den(in) <=
         static_cast<__int128>(std::llround(in.cut())) * den(out);
}

// Random cluster with volume at most half the total.
std::vector<VertexId> random_small_cluster(const Graph& g, Rng& rng,
                                           std::size_t max_size) {
  const auto vs = lt::positive_degree_vertices(g);
  std::vector<VertexId> out;
  std::vector<char> used(g.vertex_count(), 0);
  double vol = 0.0;
  const std::size_t want = 1 + rng.uniform_below(max_size);
  for (std::size_t tries = 0; tries < 8 * want; ++tries) {
    if (out.size() >= want) break;
    const VertexId v = vs[rng.uniform_below(vs.size())];
    if (used[v]) continue;
    if (2.0 * (vol + g.degree(v)) > g.total_volume()) continue;
    used[v] = 1;
    vol += g.degree(v);
    out.push_back(v);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("max_flow: single arc") {
  FlowNetwork net(2, 0, 1);
  net.add_arc(0, 1, 7);
  const auto r = net.max_flow();
  CHECK(r.value == 7);
  CHECK(r.source_side == std::vector<int>{0});
}

TEST_CASE("max_flow: diamond") {
  // s=0, a=1, b=2, t=3
  FlowNetwork net(4, 0, 3);
  net.add_arc(0, 1, 3);
  net.add_arc(0, 2, 2);
  net.add_arc(1, 3, 2);
  net.add_arc(2, 3, 3);
  const auto r = net.max_flow();
  CHECK(r.value == 4);
}

TEST_CASE("max_flow: guards on arcs and capacities") {
  FlowNetwork net(3, 0, 2);
  CHECK_THROWS_AS(net.add_arc(1, 0, 5), DomainError);   // into source
  CHECK_THROWS_AS(net.add_arc(2, 1, 5), DomainError);   // out of sink
  CHECK_THROWS_AS(net.add_arc(0, 1, -1), SolverError);  // negative
  CHECK_THROWS_AS(net.add_arc(0, 0, 1), DomainError);   // self arc
  CHECK_THROWS_AS(FlowNetwork(2, 0, 0), DomainError);   // source == sink
}

TEST_CASE("max_flow: equals exhaustive min-cut enumeration") {
  Rng rng(4242);
  for (int trial = 0; trial < 100; ++trial) {
    const int nodes = 4 + static_cast<int>(rng.uniform_below(5));  // 4..8
    const int s = 0, t = 1;
    FlowNetwork net(nodes, s, t);
    std::vector<lt::OracleArc> arcs;
    const int arc_count = 6 + static_cast<int>(rng.uniform_below(10));
    for (int a = 0; a < arc_count; ++a) {
      const int from = static_cast<int>(rng.uniform_below(nodes));
      const int to = static_cast<int>(rng.uniform_below(nodes));
      if (from == to || to == s || from == t) continue;
      const std::int64_t cap = 1 + rng.uniform_below(10);
      net.add_arc(from, to, cap);
      arcs.push_back({from, to, cap});
    }
    // max_flow() internally certifies flow == cut capacity on every call.
    const auto r = net.max_flow();
    CHECK(r.value == lt::min_cut_enumeration(nodes, s, t, arcs));
  }
}

TEST_CASE("mqi: an optimal clique is returned unchanged") {
  const Graph g = two_cliques_bridge(10);
  std::vector<VertexId> clique;
  for (VertexId v = 0; v < 10; ++v) clique.push_back(v);
  const Cluster a = Cluster::from_set(g, clique);
  const ImproveResult r = mqi(g, a);
  CHECK(r.cluster.members() == clique);
  CHECK(r.conductance_trace.size() == 1);
  // Brute force: no subset does better.
  const auto [bc, bv] = lt::best_subset_quotient(g, clique);
  CHECK(r.cluster.cut() == static_cast<double>(bc));
  CHECK(r.cluster.volume() == static_cast<double>(bv));
}

TEST_CASE("mqi: sheds a bolted-on boundary vertex") {
  // K8 bridged to a larger K12 keeps clique-plus-one under half the volume.
  std::vector<Edge> edges;
  for (VertexId a = 0; a < 8; ++a)
    for (VertexId b = a + 1; b < 8; ++b) edges.push_back({a, b});
  for (VertexId a = 8; a < 20; ++a)
    for (VertexId b = a + 1; b < 20; ++b) edges.push_back({a, b});
  edges.push_back({0, 8});
  const Graph g = Graph::from_edges(edges);

  std::vector<VertexId> a = {0, 1, 2, 3, 4, 5, 6, 7, 8};  // clique + bridge end
  const ImproveResult r = mqi(g, Cluster::from_set(g, a));
  const std::vector<VertexId> clique = {0, 1, 2, 3, 4, 5, 6, 7};
  CHECK(r.cluster.members() == clique);
  CHECK(r.iterations >= 1);
  const auto [bc, bv] = lt::best_subset_quotient(g, a);
  CHECK(static_cast<__int128>(std::llround(r.cluster.cut())) * bv ==
        static_cast<__int128>(bc) * std::llround(r.cluster.volume()));
}

TEST_CASE("mqi: single vertex is already optimal") {
  const Graph g = two_cliques_bridge(6);
  const ImproveResult r =
      mqi(g, Cluster::from_set(g, std::vector<VertexId>{3}));
  CHECK(r.cluster.members() == std::vector<VertexId>{3});
  CHECK(r.cluster.conductance() == 1.0);
}

TEST_CASE("mqi: equals brute force over subsets on random instances") {
  Rng rng(515);
  for (int trial = 0; trial < 30; ++trial) {
    const Graph g = lt::random_graph(18, 0.25, 10000 + trial);
    const std::vector<VertexId> a = random_small_cluster(g, rng, 12);
    if (a.empty()) continue;
    Cluster input;
    try {
      input = Cluster::from_set(g, a);
    } catch (const DomainError&) {
      continue;  // zero-volume or non-strict subset draw
    }
    const ImproveResult r = mqi(g, input);
    const auto [bc, bv] = lt::best_subset_quotient(g, a);
    CHECK(static_cast<__int128>(std::llround(r.cluster.cut())) * bv ==
          static_cast<__int128>(bc) * std::llround(r.cluster.volume()));
    // Output is a subset of the input.
    for (VertexId v : r.cluster.members()) CHECK(input.contains(v));
    // Idempotence.
    const ImproveResult again = mqi(g, r.cluster);
    CHECK(again.cluster.members() == r.cluster.members());
    // Trace is strictly decreasing and ends at the output conductance.
    for (std::size_t i = 1; i < r.conductance_trace.size(); ++i) {
      CHECK(r.conductance_trace[i] < r.conductance_trace[i - 1]);
    }
    CHECK(r.conductance_trace.back() == r.cluster.conductance());
  }
}

TEST_CASE("mqi: complements oversized clusters and flags it") {
  const Graph g = two_cliques_bridge(8);
  std::vector<VertexId> big;
  for (VertexId v = 0; v < 12; ++v) big.push_back(v);  // vol > half
  const ImproveResult r = mqi(g, Cluster::from_set(g, big));
  CHECK(r.complemented);
  CHECK(r.cluster.volume() <= g.total_volume() / 2.0);
}

TEST_CASE("flow_improve: non-worsening and strictly decreasing trace") {
  Rng rng(616);
  for (int trial = 0; trial < 25; ++trial) {
    const Graph g = lt::random_graph(16, 0.3, 20000 + trial);
    const std::vector<VertexId> a = random_small_cluster(g, rng, 8);
    if (a.empty()) continue;
    Cluster input;
    try {
      input = Cluster::from_set(g, a);
    } catch (const DomainError&) {
      continue;
    }
    const ImproveResult r = flow_improve(g, input);
    CHECK(phi_not_worse(g, r.cluster, input));
    for (std::size_t i = 1; i < r.conductance_trace.size(); ++i) {
      CHECK(r.conductance_trace[i] < r.conductance_trace[i - 1]);
    }
    CHECK(r.conductance_trace.back() == r.cluster.conductance());
    CHECK(r.iterations >= 1);
  }
}

TEST_CASE("flow_improve: repairs a clique with swapped members") {
  const Graph g = two_cliques_bridge(10);
  // Three clique-1 members swapped for clique-2 members.
  std::vector<VertexId> a = {1, 2, 3, 4, 5, 6, 7, 11, 12, 13};
  const ImproveResult r = flow_improve(g, Cluster::from_set(g, a));
  CHECK(r.cluster.conductance() == doctest::Approx(1.0 / 91.0));
  // The repaired set is one of the two cliques.
  CHECK(r.cluster.size() == 10);
  CHECK(r.cluster.cut() == 1.0);
}

TEST_CASE("flow_improve: finds the global best on a small instance") {
  const Graph g = two_cliques_bridge(6);
  std::vector<VertexId> a = {1, 2, 3, 7, 8};  // straddles the bridge
  const ImproveResult r = flow_improve(g, Cluster::from_set(g, a));
  const auto [bc, bd] = lt::global_best_conductance(g);
  CHECK(r.cluster.conductance() ==
        doctest::Approx(static_cast<double>(bc) / static_cast<double>(bd)));
}

TEST_CASE("flow_improve: fixed point returns the input") {
  const Graph g = two_cliques_bridge(10);
  std::vector<VertexId> clique;
  for (VertexId v = 0; v < 10; ++v) clique.push_back(v);
  const Cluster a = Cluster::from_set(g, clique);
  const ImproveResult r = flow_improve(g, a);
  CHECK(r.cluster.members() == clique);
  CHECK(r.cluster.conductance() == a.conductance());
}

TEST_CASE("simple_local: delta 0 equals flow_improve") {
  Rng rng(717);
  for (int trial = 0; trial < 25; ++trial) {
    const Graph g = lt::random_graph(20, 0.25, 30000 + trial);
    const std::vector<VertexId> a = random_small_cluster(g, rng, 9);
    if (a.empty()) continue;
    Cluster input;
    try {
      input = Cluster::from_set(g, a);
    } catch (const DomainError&) {
      continue;
    }
    const ImproveResult fi = flow_improve(g, input);
    const ImproveResult sl = simple_local(g, input, 0.0);
    CHECK(fi.cluster.members() == sl.cluster.members());
    CHECK(fi.iterations == sl.iterations);
  }
}

TEST_CASE("simple_local: huge delta collapses into the input cluster") {
  const Graph g = two_cliques_bridge(10);
  std::vector<VertexId> a = {1, 2, 3, 4, 5, 6, 7, 11, 12, 13};
  const Cluster input = Cluster::from_set(g, a);
  const ImproveResult r = simple_local(g, input, 1000.0);
  for (VertexId v : r.cluster.members()) CHECK(input.contains(v));
  CHECK(phi_not_worse(g, r.cluster, input));
}

TEST_CASE("simple_local: touched vertices ignore far-away components") {
  const Graph component = ring_of_cliques(6, 5);
  std::vector<Graph> few(3, component), many(30, component);
  const Graph small_world = disjoint_union(few);
  const Graph big_world = disjoint_union(many);
  std::vector<VertexId> a = {0, 1, 2, 3, 4};  // one clique in component 0

  const ImproveResult rs = simple_local(small_world, Cluster::from_set(small_world, a), 1.0);
  const ImproveResult rb = simple_local(big_world, Cluster::from_set(big_world, a), 1.0);
  CHECK(rs.touched == rb.touched);
  CHECK(rs.touched <= component.vertex_count());
  CHECK(rs.cluster.members() == rb.cluster.members());
}

TEST_CASE("simple_local: rejects bad deltas") {
  const Graph g = two_cliques_bridge(4);
  const Cluster a = Cluster::from_set(g, std::vector<VertexId>{0, 1});
  CHECK_THROWS_AS(simple_local(g, a, -1.0), DomainError);
  CHECK_THROWS_AS(simple_local(g, a, 1.0 / 3.0), DomainError);
  CHECK_NOTHROW(simple_local(g, a, 0.25));
}

TEST_CASE("flow methods reject fractional weights they cannot scale") {
  std::vector<Edge> edges = {{0, 1, 1.0 / 3.0}, {1, 2, 1.0}, {0, 2, 1.0}};
  const Graph g = Graph::from_edges(edges, true);
  const Cluster a = Cluster::from_set(g, std::vector<VertexId>{0});
  CHECK_THROWS_AS(mqi(g, a), SolverError);
}

TEST_CASE("flow methods handle decimal weights through scaling") {
  std::vector<Edge> edges = {{0, 1, 0.5}, {1, 2, 1.5}, {0, 2, 1.0},
                             {2, 3, 0.1}, {3, 4, 2.0}, {4, 2, 1.0}};
  const Graph g = Graph::from_edges(edges, true);
  const Cluster a = Cluster::from_set(g, std::vector<VertexId>{0, 1});
  const ImproveResult r = mqi(g, a);
  CHECK(r.cluster.conductance() <= a.conductance() + 1e-12);
}
