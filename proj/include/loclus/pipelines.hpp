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

#ifndef LOCLUS_PIPELINES_HPP_
#define LOCLUS_PIPELINES_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "loclus/diffusion.hpp"
#include "loclus/graph.hpp"

namespace loclus {

/// One network-community-profile sample: the best (lowest-conductance)
/// cluster whose vertex count landed in [bin_lo, bin_hi], together with
/// the method and parameters that produced it. Bins with no cluster keep
/// found == false and empty score fields; values are never fabricated.
struct NcpRecord {
  std::size_t bin_lo = 0;
  std::size_t bin_hi = 0;
  bool found = false;
  std::string method;
  VertexId seed = 0;
  double alpha = 0.0;
  double eps = 0.0;   // 0 when the method has no eps
  double rho = 0.0;   // 0 when the method has no rho
  std::size_t cluster_size = 0;
  double cluster_volume = 0.0;
  double cut = 0.0;
  double conductance = 0.0;
  std::optional<Cluster> cluster;
};

struct NcpOptions {
  std::string method = "acl";  // "acl" or "l1reg"
  std::vector<double> alphas = {0.01, 0.1};
  std::vector<double> epses = {1e-3, 1e-5, 1e-7};  // acl grid
  std::vector<double> rhos = {1e-4};               // l1reg grid
  std::size_t bins = 8;
  std::size_t seeds_per_bin = 5;
  std::uint64_t rng_seed = 1;
  int threads = 1;
  bool all_records = false;          // emit every in-bin candidate
  bool degree_biased_seeds = false;  // sample seeds by degree, not uniformly
  int l1_max_iters = 100000;
  double l1_kkt_tol = 1e-6;
};

/// Approximate network community profile: log-spaced vertex-count bins up
/// to n/2; for each bin, seeds_per_bin sampled seeds x the parameter grid,
/// each run swept, and the minimum-conductance cluster landing in the bin
/// recorded. A pure function of (graph, options): seed sampling uses
/// per-task derived RNG streams, and records are emitted in (bin, seed,
/// grid) order, so output is identical for any thread count.
std::vector<NcpRecord> compute_ncp(const Graph& g, const NcpOptions& options);

struct LabelAssignment {
  static constexpr std::int32_t kUnlabeled = -1;
  std::vector<std::int32_t> labels;  // per vertex; kUnlabeled when no mass
  std::vector<double> scores;        // winning diffusion value / degree
};

/// Seeded multi-class label prediction: one diffusion per class, each
/// vertex labeled argmax over classes of value/degree (ties to the lowest
/// class id), seeds pinned to their own class, vertices with all-zero
/// scores left unlabeled.
LabelAssignment predict_labels(const Graph& g,
                               const std::map<std::int32_t, SeedSet>& classes,
                               const DiffusionParams& params,
                               SpectralMethod method);

struct RecoveryScore {
  double precision = 0.0;  // vol(found ∩ target) / vol(found)
  double recall = 0.0;     // vol(found ∩ target) / vol(target)
  double precision_cardinality = 0.0;
  double recall_cardinality = 0.0;
};

RecoveryScore evaluate_recovery(const Graph& g, const Cluster& found,
                                const Cluster& target);

// --- synthetic graph generators (deterministic in rng_seed) ---

/// k cliques of c vertices each, consecutive cliques joined by one edge
/// around a ring (2 ring edges per clique). Vertices of clique i are
/// [i*c, (i+1)*c).
Graph ring_of_cliques(std::size_t k, std::size_t c);

/// `blocks` blocks of `block_size` vertices; each within-block pair is an
/// edge with probability p_in, cross-block pairs with p_out.
Graph planted_partition(std::size_t blocks, std::size_t block_size,
                        double p_in, double p_out, std::uint64_t rng_seed);

/// n uniform points in the unit square, edges between pairs at distance
/// <= radius.
Graph random_geometric(std::size_t n, double radius, std::uint64_t rng_seed);

/// Relabels and concatenates: component j's vertex v becomes
/// v + sum of earlier vertex counts.
Graph disjoint_union(std::span<const Graph> parts);

enum class SyntheticKind { kRingOfCliques, kPlantedPartition, kRandomGeometric };

struct SyntheticSpec {
  SyntheticKind kind = SyntheticKind::kRingOfCliques;
  std::size_t k = 3, c = 3;                 // ring_of_cliques
  std::size_t blocks = 2, block_size = 10;  // planted_partition
  double p_in = 0.5, p_out = 0.05;
  std::size_t n = 100;                      // random_geometric
  double radius = 0.1;
};

Graph generate_synthetic(const SyntheticSpec& spec, std::uint64_t rng_seed);

}  // namespace loclus

#endif  // LOCLUS_PIPELINES_HPP_
