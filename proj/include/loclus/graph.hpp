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

#ifndef LOCLUS_GRAPH_HPP_
#define LOCLUS_GRAPH_HPP_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "loclus/embedding.hpp"
#include "loclus/error.hpp"

namespace loclus {

struct Edge {
  VertexId u = 0;
  VertexId v = 0;
  double w = 1.0;
};

/// Immutable undirected weighted graph in compressed adjacency form.
///
/// Adjacency is stored symmetrically (each undirected edge appears in both
/// endpoint lists), with no self-loops and no duplicate entries per list.
/// Unit-weight graphs skip the per-entry weight array entirely; degree(v)
/// is the weighted degree and total_volume() == sum of degrees == twice
/// the total edge weight.
///
/// A Graph never changes after construction, so it is safe to share across
/// concurrent readers without synchronization.
class Graph {
 public:
  Graph() = default;

  /// Builds a graph from an arbitrary edge list. Input is symmetrized,
  /// self-loops are dropped, and duplicate (u,v) pairs are collapsed:
  /// summed when `weighted`, to weight 1 otherwise. Vertex count is
  /// 1 + max id seen (or min_vertex_count if larger); gap ids become
  /// isolated vertices.
  static Graph from_edges(std::span<const Edge> edges, bool weighted = false,
                          std::size_t min_vertex_count = 0);

  std::size_t vertex_count() const { return degrees_.size(); }
  std::size_t edge_count() const { return m_; }

  double degree(VertexId v) const { return degrees_[v]; }
  double total_volume() const { return total_volume_; }

  std::span<const VertexId> neighbors(VertexId v) const {
    return {neighbors_.data() + offsets_[v],
            static_cast<std::size_t>(offsets_[v + 1] - offsets_[v])};
  }

  bool unit_weights() const { return weights_.empty(); }

  /// True when every edge weight is a (small) integer, in which case all
  /// conductance comparisons are carried out in exact integer arithmetic.
  bool integral_weights() const { return integral_weights_; }

  /// Calls f(u, w) for every adjacency entry of v.
  template <typename F>
  void for_edges_of(VertexId v, F&& f) const {
    const std::uint64_t b = offsets_[v], e = offsets_[v + 1];
    if (weights_.empty()) {
      for (std::uint64_t i = b; i < e; ++i) f(neighbors_[i], 1.0);
    } else {
      for (std::uint64_t i = b; i < e; ++i) f(neighbors_[i], weights_[i]);
    }
  }

  bool operator==(const Graph& other) const;

  /// Recomputes every structural invariant from scratch and throws
  /// std::logic_error on any violation. Test hook; not called on hot paths.
  void check_invariants() const;

 private:
  std::vector<std::uint64_t> offsets_;  // size n+1
  std::vector<VertexId> neighbors_;     // size 2m
  std::vector<double> weights_;         // size 2m, or empty when all 1
  std::vector<double> degrees_;         // size n, weighted degree
  double total_volume_ = 0.0;
  std::size_t m_ = 0;
  bool integral_weights_ = true;
};

struct LoadOptions {
  bool weighted = false;
  char comment = '#';
};

/// Reads a whitespace-separated edge list ("u v" or "u v w" per line,
/// comment lines skipped). Throws DataError with the offending line number
/// on malformed input, non-positive weights, or an edge-free result.
Graph load_edge_list(const std::string& path, const LoadOptions& opts = {});

struct CompactLoad {
  Graph graph;
  std::vector<VertexId> original_ids;  // original_ids[new_id] = input id
};

/// Like load_edge_list but remaps the ids that actually occur to a dense
/// 0-based range, returning the mapping alongside the graph.
CompactLoad load_edge_list_compact(const std::string& path,
                                   const LoadOptions& opts = {});

/// Writes one "u v" or "u v w" line per undirected edge (u < v), with
/// round-trip-exact weight formatting.
void write_edge_list(const Graph& g, const std::string& path);
void write_edge_list(const Graph& g, std::ostream& out);

/// Three-way comparison of the ratios a/b and c/d (b, d > 0).
/// With `exact` set, operands are exact integers stored in doubles and the
/// comparison cross-multiplies in 128-bit arithmetic; otherwise a relative
/// tolerance of kRatioTolerance is applied.
int compare_ratio(double a, double b, double c, double d, bool exact);

inline constexpr double kRatioTolerance = 1e-12;

struct CutVolume {
  double cut = 0.0;
  double volume = 0.0;
};

/// Cut and volume of a vertex set by direct edge scan. `members` must be
/// sorted, duplicate-free and in range.
CutVolume cut_and_volume(const Graph& g, std::span<const VertexId> members);

/// cut(s) / min(vol(s), total - vol(s)). Throws DomainError when s is
/// empty, is not a strict subset, or either side has zero volume.
double conductance(const Graph& g, std::span<const VertexId> members);

/// Vertex set with cached cut, volume and conductance; the universal
/// output type of every clustering method here.
class Cluster {
 public:
  Cluster() = default;

  /// Validates (nonempty, unique, in range, strict subset, nonzero
  /// volume) and computes the cached scores by direct edge scan.
  static Cluster from_set(const Graph& g, std::span<const VertexId> members);

  const std::vector<VertexId>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  double cut() const { return cut_; }
  double volume() const { return volume_; }
  double conductance() const { return conductance_; }
  bool contains(VertexId v) const;

 private:
  std::vector<VertexId> members_;  // sorted, unique
  double cut_ = 0.0;
  double volume_ = 0.0;
  double conductance_ = 0.0;
};

/// Nonempty, duplicate-free vertex ids, all with positive degree.
struct SeedSet {
  std::vector<VertexId> ids;  // sorted

  static SeedSet from_ids(const Graph& g, std::span<const VertexId> ids);
};

/// Sweep cut: orders the support of x by x(v)/deg(v) (ties by ascending
/// id) and returns the strict-subset prefix of minimum conductance, ties
/// broken toward the smaller prefix.
Cluster sweep_cut(const Graph& g, const SparseEmbedding& x);

}  // namespace loclus

#endif  // LOCLUS_GRAPH_HPP_
