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
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <vector>

#include "doctest.h"
#include "loclus/pipelines.hpp"
#include "loclus/serialize.hpp"
#include "oracles.hpp"

using namespace loclus;
namespace lt = loclus::testing;

namespace {

Graph clique(std::size_t c) {
  std::vector<Edge> edges;
  for (VertexId a = 0; a < c; ++a)
    for (VertexId b = a + 1; b < c; ++b) edges.push_back({a, b});
  return Graph::from_edges(edges);
}

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

}  // namespace

TEST_CASE("ring_of_cliques: counts and degrees") {
  const Graph g = ring_of_cliques(3, 3);
  CHECK(g.vertex_count() == 9);
  CHECK(g.edge_count() == 12);
  g.check_invariants();

  const Graph big = ring_of_cliques(20, 10);
  CHECK(big.vertex_count() == 200);
  CHECK(big.edge_count() == 20 * 45 + 20);
  const Cluster one = Cluster::from_set(
      big, std::vector<VertexId>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9});
  CHECK(one.cut() == 2.0);
  CHECK(one.volume() == 92.0);
}

TEST_CASE("planted_partition: degenerate cases and determinism") {
  const Graph disjoint = planted_partition(3, 4, 1.0, 0.0, 5);
  CHECK(disjoint.vertex_count() == 12);
  CHECK(disjoint.edge_count() == 3 * 6);  // three K4s
  CHECK(conductance(disjoint, std::vector<VertexId>{0, 1, 2, 3}) == 0.0);

  const Graph a = planted_partition(2, 20, 0.5, 0.05, 99);
  const Graph b = planted_partition(2, 20, 0.5, 0.05, 99);
  CHECK(a == b);
  const Graph c = planted_partition(2, 20, 0.5, 0.05, 100);
  CHECK_FALSE(a == c);

  CHECK_THROWS_AS(planted_partition(2, 10, 1.5, 0.0, 1), DomainError);
  CHECK_THROWS_AS(planted_partition(1, 1, 0.5, 0.5, 1), DomainError);
  CHECK_THROWS_AS(ring_of_cliques(4, 1), DomainError);
}

TEST_CASE("random_geometric: mean degree tracks n*pi*r^2 within 10%") {
  const std::size_t n = 5000;
  const double r = 0.03;
  const Graph g = random_geometric(n, r, 12345);
  double mean = 0.0;
  for (std::size_t v = 0; v < n; ++v) mean += g.degree(static_cast<VertexId>(v));
  mean /= static_cast<double>(n);
  const double expected = static_cast<double>(n) * std::numbers::pi * r * r;
  CHECK(std::abs(mean - expected) / expected <= 0.10);
}

TEST_CASE("disjoint_union: offsets ids and keeps degrees") {
  std::vector<Graph> parts = {clique(4), ring_of_cliques(3, 3)};
  const Graph g = disjoint_union(parts);
  CHECK(g.vertex_count() == 4 + 9);
  CHECK(g.degree(0) == 3.0);
  CHECK(g.degree(4) == parts[1].degree(0));
  CHECK(conductance(g, std::vector<VertexId>{0, 1, 2, 3}) == 0.0);
}

TEST_CASE("compute_ncp: ring of cliques puts 2/92 in the size-10 bin") {
  const Graph g = ring_of_cliques(20, 10);
  NcpOptions o;
  o.seeds_per_bin = 5;
  o.rng_seed = 42;
  const auto records = compute_ncp(g, o);

  bool checked = false;
  for (const NcpRecord& r : records) {
    if (r.bin_lo <= 10 && 10 <= r.bin_hi) {
      REQUIRE(r.found);
      CHECK(r.cut == 2.0);
      CHECK(r.cluster_volume == 92.0);
      CHECK(r.cluster_size == 10);
      CHECK(r.conductance == doctest::Approx(2.0 / 92.0));
      checked = true;
    }
  }
  CHECK(checked);

  // Every found record's cached conductance reproduces from its cluster.
  for (const NcpRecord& r : records) {
    if (!r.found) continue;
    REQUIRE(r.cluster.has_value());
    const auto [cut, vol] = lt::naive_cut_volume(g, r.cluster->members());
    CHECK(cut == r.cut);
    CHECK(vol == r.cluster_volume);
    CHECK(r.conductance ==
          cut / std::min(vol, g.total_volume() - vol));
    CHECK(r.bin_lo <= r.cluster_size);
    CHECK(r.cluster_size <= r.bin_hi);
  }
}

TEST_CASE("compute_ncp: complete-graph bins stop at n-1") {
  const Graph k4 = clique(4);
  NcpOptions o;
  o.bins = 3;
  o.seeds_per_bin = 3;
  o.epses = {0.2, 1e-3};  // large eps keeps support at the seed alone
  o.rng_seed = 7;
  const auto records = compute_ncp(k4, o);
  REQUIRE(!records.empty());
  std::size_t max_hi = 0;
  for (const NcpRecord& r : records) {
    max_hi = std::max(max_hi, r.bin_hi);
    if (!r.found) continue;
    CHECK(r.cluster_size <= 3);
    if (r.cluster_size == 1) CHECK(r.conductance == 1.0);
    if (r.cluster_size == 2) {
      CHECK(r.conductance == doctest::Approx(2.0 / 3.0));
    }
  }
  CHECK(max_hi == 3);
  // The singleton bin is reachable with the coarse eps.
  const NcpRecord& first = records.front();
  CHECK(first.bin_lo == 1);
  CHECK(first.found);
  CHECK(first.conductance == 1.0);
}

TEST_CASE("compute_ncp: pure function of options, any thread count") {
  const Graph g = ring_of_cliques(8, 6);
  NcpOptions o;
  o.bins = 6;
  o.seeds_per_bin = 4;
  o.rng_seed = 2024;
  o.all_records = true;
  const auto a = compute_ncp(g, o);
  const auto b = compute_ncp(g, o);
  o.threads = 4;
  const auto c = compute_ncp(g, o);
  CHECK(ncp_to_csv(a) == ncp_to_csv(b));
  CHECK(ncp_to_csv(a) == ncp_to_csv(c));
}

TEST_CASE("compute_ncp: bins with nothing found stay empty, never faked") {
  // One tiny clique: large-size bins cannot be filled.
  const Graph g = two_cliques_bridge(3);
  NcpOptions o;
  o.bins = 4;
  o.seeds_per_bin = 2;
  o.epses = {0.5};  // big eps: barely any diffusion
  o.rng_seed = 3;
  const auto records = compute_ncp(g, o);
  bool some_empty = false;
  for (const NcpRecord& r : records) {
    if (!r.found) {
      some_empty = true;
      CHECK(r.conductance == 0.0);
      CHECK(r.cluster_size == 0);
      CHECK(!r.cluster.has_value());
    }
  }
  CHECK(some_empty);
}

TEST_CASE("compute_ncp: l1reg method and degree-biased seeds run") {
  const Graph g = ring_of_cliques(6, 5);
  NcpOptions o;
  o.method = "l1reg";
  o.alphas = {0.1};
  o.rhos = {1e-3};
  o.bins = 4;
  o.seeds_per_bin = 2;
  o.degree_biased_seeds = true;
  const auto records = compute_ncp(g, o);
  CHECK(!records.empty());
  CHECK_THROWS_AS(
      [&] {
        NcpOptions bad = o;
        bad.method = "nope";
        compute_ncp(g, bad);
      }(),
      DomainError);
}

TEST_CASE("predict_labels: disjoint cliques get their own classes") {
  std::vector<Graph> parts = {clique(10), clique(10), clique(4)};
  const Graph g = disjoint_union(parts);  // third component stays unseeded
  std::map<std::int32_t, SeedSet> classes;
  classes.emplace(0, SeedSet::from_ids(g, std::vector<VertexId>{2}));
  classes.emplace(1, SeedSet::from_ids(g, std::vector<VertexId>{13}));
  DiffusionParams params;
  params.alpha = 0.1;
  params.eps = 1e-7;
  const LabelAssignment out =
      predict_labels(g, classes, params, SpectralMethod::kAcl);
  for (VertexId v = 0; v < 10; ++v) CHECK(out.labels[v] == 0);
  for (VertexId v = 10; v < 20; ++v) CHECK(out.labels[v] == 1);
  for (VertexId v = 20; v < 24; ++v) {
    CHECK(out.labels[v] == LabelAssignment::kUnlabeled);
  }
}

TEST_CASE("predict_labels: bridge graph splits at the bridge") {
  const Graph g = two_cliques_bridge(10);
  std::map<std::int32_t, SeedSet> classes;
  classes.emplace(1, SeedSet::from_ids(g, std::vector<VertexId>{4}));
  classes.emplace(2, SeedSet::from_ids(g, std::vector<VertexId>{15}));
  DiffusionParams params;
  params.alpha = 0.1;
  params.eps = 1e-7;
  const LabelAssignment out =
      predict_labels(g, classes, params, SpectralMethod::kAcl);
  for (VertexId v = 0; v < 10; ++v) CHECK(out.labels[v] == 1);
  for (VertexId v = 10; v < 20; ++v) CHECK(out.labels[v] == 2);
}

TEST_CASE("predict_labels: single class labels exactly the support") {
  const Graph g = two_cliques_bridge(6);
  std::map<std::int32_t, SeedSet> classes;
  classes.emplace(5, SeedSet::from_ids(g, std::vector<VertexId>{1}));
  DiffusionParams params;
  params.alpha = 0.2;
  params.eps = 1e-4;
  const LabelAssignment out =
      predict_labels(g, classes, params, SpectralMethod::kAcl);
  const PushResult pr = approximate_pagerank(
      g, SeedSet::from_ids(g, std::vector<VertexId>{1}), params);
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    if (pr.p.contains(static_cast<VertexId>(v))) {
      CHECK(out.labels[v] == 5);
    } else {
      CHECK(out.labels[v] == LabelAssignment::kUnlabeled);
    }
  }
}

TEST_CASE("predict_labels: argmax is invariant to common scaling") {
  const Graph g = two_cliques_bridge(8);
  DiffusionParams params;
  params.alpha = 0.15;
  params.eps = 1e-6;
  const SeedSet s0 = SeedSet::from_ids(g, std::vector<VertexId>{0});
  const SeedSet s1 = SeedSet::from_ids(g, std::vector<VertexId>{9});
  const SparseEmbedding p0 = approximate_pagerank(g, s0, params).p;
  const SparseEmbedding p1 = approximate_pagerank(g, s1, params).p;
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    const double a = p0.value(static_cast<VertexId>(v));
    const double b = p1.value(static_cast<VertexId>(v));
    const int arg = a >= b ? 0 : 1;
    const int arg_scaled = 3.7 * a >= 3.7 * b ? 0 : 1;
    CHECK(arg == arg_scaled);
  }
}

TEST_CASE("predict_labels: overlapping and empty classes are rejected") {
  const Graph g = two_cliques_bridge(4);
  std::map<std::int32_t, SeedSet> classes;
  classes.emplace(0, SeedSet::from_ids(g, std::vector<VertexId>{0}));
  classes.emplace(1, SeedSet::from_ids(g, std::vector<VertexId>{0}));
  DiffusionParams params;
  CHECK_THROWS_AS(predict_labels(g, classes, params, SpectralMethod::kAcl),
                  DomainError);
  CHECK_THROWS_AS(SeedSet::from_ids(g, std::vector<VertexId>{}), DomainError);
  CHECK_THROWS_AS(
      predict_labels(g, {}, params, SpectralMethod::kAcl), DomainError);
}

TEST_CASE("evaluate_recovery: identity, disjoint, containment") {
  const Graph g = [] {
    std::vector<Edge> edges;
    for (VertexId i = 0; i < 8; ++i) {
      edges.push_back({i, static_cast<VertexId>((i + 1) % 8)});
    }
    return Graph::from_edges(edges);  // C8, all degrees 2
  }();
  const Cluster target =
      Cluster::from_set(g, std::vector<VertexId>{0, 1, 2, 3});
  const Cluster same = Cluster::from_set(g, std::vector<VertexId>{0, 1, 2, 3});
  const RecoveryScore id = evaluate_recovery(g, same, target);
  CHECK(id.precision == 1.0);
  CHECK(id.recall == 1.0);

  const Cluster off = Cluster::from_set(g, std::vector<VertexId>{5, 6});
  const RecoveryScore none = evaluate_recovery(g, off, target);
  CHECK(none.precision == 0.0);
  CHECK(none.recall == 0.0);

  const Cluster half = Cluster::from_set(g, std::vector<VertexId>{0, 1});
  const RecoveryScore part = evaluate_recovery(g, half, target);
  CHECK(part.precision == 1.0);
  CHECK(part.recall == 0.5);
  CHECK(part.precision_cardinality == 1.0);
  CHECK(part.recall_cardinality == 0.5);
}

TEST_CASE("evaluate_recovery: swapping arguments swaps the scores") {
  Rng rng(88);
  const Graph g = lt::random_graph(14, 0.3, 4100);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<VertexId> a, b;
    for (std::size_t v = 0; v < g.vertex_count(); ++v) {
      if (g.degree(static_cast<VertexId>(v)) == 0.0) continue;
      if (rng.uniform01() < 0.4) a.push_back(static_cast<VertexId>(v));
      if (rng.uniform01() < 0.4) b.push_back(static_cast<VertexId>(v));
    }
    if (a.empty() || b.empty()) continue;
    if (a.size() >= g.vertex_count() || b.size() >= g.vertex_count()) continue;
    const Cluster ca = Cluster::from_set(g, a);
    const Cluster cb = Cluster::from_set(g, b);
    const RecoveryScore ab = evaluate_recovery(g, ca, cb);
    const RecoveryScore ba = evaluate_recovery(g, cb, ca);
    CHECK(ab.precision == ba.recall);
    CHECK(ab.recall == ba.precision);
  }
}

TEST_CASE("serialization: csv and json emitters are stable") {
  const Graph g = two_cliques_bridge(4);
  const Cluster c = Cluster::from_set(g, std::vector<VertexId>{0, 1, 2, 3});
  const std::string j = cluster_to_json(c);
  CHECK(j.find("\"members\":[0,1,2,3]") != std::string::npos);
  CHECK(j.find("\"conductance\"") != std::string::npos);

  SparseEmbedding x;
  x.set(3, 0.25);
  x.set(10, 0.5);
  CHECK(embedding_to_json(x) == "{\"3\":0.25,\"10\":0.5}");
  CHECK(embedding_to_csv(x) == "vertex,value\n3,0.25\n10,0.5\n");

  RecoveryScore s{1.0, 0.5, 1.0, 0.25};
  CHECK(recovery_to_json(s) ==
        "{\"precision\":1.0,\"recall\":0.5,\"precision_cardinality\":1.0,"
        "\"recall_cardinality\":0.25}");
}
