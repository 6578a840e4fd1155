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

#include "loclus/graph.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

namespace loclus {

namespace {

bool is_integral(double w) {
  return w == std::floor(w) && std::abs(w) < 9.0e15;
}

}  // namespace

Graph Graph::from_edges(std::span<const Edge> edges, bool weighted,
                        std::size_t min_vertex_count) {
  std::size_t n = min_vertex_count;
  for (const Edge& e : edges) {
    if (e.u != e.v) {
      n = std::max<std::size_t>(n, std::max(e.u, e.v) + std::size_t{1});
    }
  }

  if (n == 0) throw DataError("empty graph: no edges");
  Graph g;
  g.offsets_.assign(n + 1, 0);
  g.degrees_.assign(n, 0.0);

  // Counting pass over both directions, self-loops skipped.
  for (const Edge& e : edges) {
    if (e.u == e.v) continue;
    if (weighted && !(e.w > 0.0)) {
      throw DataError("edge weight must be positive");
    }
    ++g.offsets_[e.u + 1];
    ++g.offsets_[e.v + 1];
  }
  for (std::size_t i = 0; i < n; ++i) g.offsets_[i + 1] += g.offsets_[i];

  std::vector<VertexId> adj(g.offsets_[n]);
  std::vector<double> wts;
  if (weighted) wts.resize(g.offsets_[n]);
  std::vector<std::uint64_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
  for (const Edge& e : edges) {
    if (e.u == e.v) continue;
    adj[fill[e.u]] = e.v;
    adj[fill[e.v]] = e.u;
    if (weighted) {
      wts[fill[e.u]] = e.w;
      wts[fill[e.v]] = e.w;
    }
    ++fill[e.u];
    ++fill[e.v];
  }

  // Per-vertex sort and duplicate collapse. Rows are staged in a scratch
  // buffer so compaction can safely write over the region being read.
  std::uint64_t write = 0;
  std::uint64_t read_begin = 0;
  std::vector<std::pair<VertexId, double>> row;
  for (std::size_t v = 0; v < n; ++v) {
    const std::uint64_t read_end = g.offsets_[v + 1];
    row.clear();
    for (std::uint64_t i = read_begin; i < read_end; ++i) {
      row.emplace_back(adj[i], weighted ? wts[i] : 1.0);
    }
    std::sort(row.begin(), row.end());

    const std::uint64_t row_start = write;
    for (const auto& [u, w] : row) {
      if (write > row_start && adj[write - 1] == u) {
        if (weighted) wts[write - 1] += w;  // duplicates sum when weighted
      } else {
        adj[write] = u;
        if (weighted) wts[write] = w;
        ++write;
      }
    }
    read_begin = read_end;
    g.offsets_[v + 1] = write;
  }
  adj.resize(write);
  adj.shrink_to_fit();
  if (weighted) {
    wts.resize(write);
    wts.shrink_to_fit();
  }

  g.neighbors_ = std::move(adj);
  bool all_unit = true;
  if (weighted) {
    for (double w : wts) {
      if (w != 1.0) all_unit = false;
      if (!is_integral(w)) g.integral_weights_ = false;
    }
  }
  if (weighted && !all_unit) g.weights_ = std::move(wts);

  for (std::size_t v = 0; v < n; ++v) {
    double d = 0.0;
    g.for_edges_of(static_cast<VertexId>(v),
                   [&](VertexId, double w) { d += w; });
    g.degrees_[v] = d;
    g.total_volume_ += d;
  }
  g.m_ = g.neighbors_.size() / 2;
  if (g.m_ == 0) throw DataError("empty graph: no edges");
  return g;
}

bool Graph::operator==(const Graph& other) const {
  return offsets_ == other.offsets_ && neighbors_ == other.neighbors_ &&
         weights_ == other.weights_;
}

void Graph::check_invariants() const {
  const std::size_t n = vertex_count();
  if (offsets_.size() != n + 1 || offsets_[0] != 0 ||
      offsets_[n] != neighbors_.size()) {
    throw std::logic_error("graph: bad offset array");
  }
  if (!weights_.empty() && weights_.size() != neighbors_.size()) {
    throw std::logic_error("graph: weight array size mismatch");
  }
  double vol = 0.0;
  for (std::size_t v = 0; v < n; ++v) {
    double d = 0.0;
    VertexId prev = 0;
    bool first = true;
    for (std::uint64_t i = offsets_[v]; i < offsets_[v + 1]; ++i) {
      const VertexId u = neighbors_[i];
      if (u >= n) throw std::logic_error("graph: neighbor out of range");
      if (u == v) throw std::logic_error("graph: self-loop present");
      if (!first && u <= prev) {
        throw std::logic_error("graph: adjacency not sorted/deduplicated");
      }
      prev = u;
      first = false;
      const double w = weights_.empty() ? 1.0 : weights_[i];
      if (!(w > 0.0)) throw std::logic_error("graph: non-positive weight");
      d += w;
      // Symmetry: v must appear in u's list with the same weight.
      bool found = false;
      for (std::uint64_t j = offsets_[u]; j < offsets_[u + 1]; ++j) {
        if (neighbors_[j] == v) {
          const double wj = weights_.empty() ? 1.0 : weights_[j];
          if (wj != w) throw std::logic_error("graph: asymmetric weight");
          found = true;
          break;
        }
      }
      if (!found) throw std::logic_error("graph: asymmetric adjacency");
    }
    if (std::abs(d - degrees_[v]) > 1e-9 * std::max(1.0, d)) {
      throw std::logic_error("graph: cached degree mismatch");
    }
    vol += d;
  }
  if (std::abs(vol - total_volume_) > 1e-6 * std::max(1.0, vol)) {
    throw std::logic_error("graph: cached volume mismatch");
  }
}

namespace {

struct ParsedLine {
  bool has_edge = false;
  std::uint64_t u = 0, v = 0;
  double w = 1.0;
  bool has_weight = false;
};

ParsedLine parse_line(const std::string& line, char comment,
                      std::size_t lineno) {
  ParsedLine out;
  const char* p = line.c_str();
  while (*p == ' ' || *p == '\t' || *p == '\r') ++p;
  if (*p == '\0' || *p == comment) return out;

  char* end = nullptr;
  errno = 0;
  const unsigned long long u = std::strtoull(p, &end, 10);
  if (end == p || errno != 0 || *p == '-') {
    throw DataError("malformed edge list line " + std::to_string(lineno) +
                    ": expected vertex id");
  }
  p = end;
  while (*p == ' ' || *p == '\t') ++p;
  errno = 0;
  const unsigned long long v = std::strtoull(p, &end, 10);
  if (end == p || errno != 0 || *p == '-') {
    throw DataError("malformed edge list line " + std::to_string(lineno) +
                    ": expected second vertex id");
  }
  p = end;
  while (*p == ' ' || *p == '\t') ++p;
  if (*p != '\0' && *p != '\r' && *p != comment) {
    errno = 0;
    const double w = std::strtod(p, &end);
    if (end == p || errno != 0) {
      throw DataError("malformed edge list line " + std::to_string(lineno) +
                      ": expected weight");
    }
    out.w = w;
    out.has_weight = true;
    p = end;
    while (*p == ' ' || *p == '\t' || *p == '\r') ++p;
    if (*p != '\0' && *p != comment) {
      throw DataError("malformed edge list line " + std::to_string(lineno) +
                      ": trailing tokens");
    }
  }
  if (u > std::numeric_limits<VertexId>::max() ||
      v > std::numeric_limits<VertexId>::max()) {
    throw DataError("vertex id too large on line " + std::to_string(lineno));
  }
  out.u = u;
  out.v = v;
  out.has_edge = true;
  return out;
}

std::vector<Edge> read_edges(const std::string& path, const LoadOptions& opts) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open edge list: " + path);
  std::vector<Edge> edges;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    ParsedLine pl = parse_line(line, opts.comment, lineno);
    if (!pl.has_edge) continue;
    double w = 1.0;
    if (opts.weighted) {
      w = pl.has_weight ? pl.w : 1.0;
      if (w < 0.0) {
        throw DataError("negative weight on line " + std::to_string(lineno));
      }
      if (!(w > 0.0)) {
        throw DataError("non-positive weight on line " +
                        std::to_string(lineno));
      }
    }
    edges.push_back({static_cast<VertexId>(pl.u), static_cast<VertexId>(pl.v),
                     w});
  }
  return edges;
}

}  // namespace

Graph load_edge_list(const std::string& path, const LoadOptions& opts) {
  std::vector<Edge> edges = read_edges(path, opts);
  if (edges.empty()) throw DataError("empty graph: " + path);
  return Graph::from_edges(edges, opts.weighted);
}

CompactLoad load_edge_list_compact(const std::string& path,
                                   const LoadOptions& opts) {
  std::vector<Edge> edges = read_edges(path, opts);
  if (edges.empty()) throw DataError("empty graph: " + path);

  std::vector<VertexId> ids;
  ids.reserve(edges.size() * 2);
  for (const Edge& e : edges) {
    if (e.u == e.v) continue;
    ids.push_back(e.u);
    ids.push_back(e.v);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  std::unordered_map<VertexId, VertexId> remap;
  remap.reserve(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    remap[ids[i]] = static_cast<VertexId>(i);
  }
  for (Edge& e : edges) {
    if (e.u == e.v) continue;
    e.u = remap[e.u];
    e.v = remap[e.v];
  }
  CompactLoad out;
  out.graph = Graph::from_edges(edges, opts.weighted);
  out.original_ids = std::move(ids);
  return out;
}

void write_edge_list(const Graph& g, std::ostream& out) {
  char buf[64];
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    g.for_edges_of(static_cast<VertexId>(v), [&](VertexId u, double w) {
      if (u <= v) return;
      out << v << ' ' << u;
      if (!g.unit_weights()) {
        std::snprintf(buf, sizeof buf, " %.17g", w);
        out << buf;
      }
      out << '\n';
    });
  }
}

void write_edge_list(const Graph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open for writing: " + path);
  write_edge_list(g, out);
  if (!out) throw DataError("write failed: " + path);
}

int compare_ratio(double a, double b, double c, double d, bool exact) {
  if (exact) {
    const __int128 l =
        static_cast<__int128>(std::llround(a)) * std::llround(d);
    const __int128 r =
        static_cast<__int128>(std::llround(c)) * std::llround(b);
    return l < r ? -1 : (l > r ? 1 : 0);
  }
  const double l = a * d, r = c * b;
  const double tol = kRatioTolerance * std::max({1.0, std::abs(l),
                                                 std::abs(r)});
  if (l < r - tol) return -1;
  if (l > r + tol) return 1;
  return 0;
}

CutVolume cut_and_volume(const Graph& g, std::span<const VertexId> members) {
  std::vector<std::uint8_t> in_set(g.vertex_count(), 0);
  for (VertexId v : members) in_set[v] = 1;
  CutVolume cv;
  for (VertexId v : members) {
    cv.volume += g.degree(v);
    g.for_edges_of(v, [&](VertexId u, double w) {
      if (!in_set[u]) cv.cut += w;
    });
  }
  return cv;
}

namespace {

std::vector<VertexId> checked_sorted_members(const Graph& g,
                                             std::span<const VertexId> s) {
  if (s.empty()) throw DomainError("vertex set is empty");
  std::vector<VertexId> members(s.begin(), s.end());
  std::sort(members.begin(), members.end());
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (members[i] >= g.vertex_count()) {
      throw DomainError("vertex id " + std::to_string(members[i]) +
                        " out of range");
    }
    if (i > 0 && members[i] == members[i - 1]) {
      throw DomainError("duplicate vertex id " + std::to_string(members[i]));
    }
  }
  if (members.size() >= g.vertex_count()) {
    throw DomainError("vertex set must be a strict subset");
  }
  return members;
}

}  // namespace

double conductance(const Graph& g, std::span<const VertexId> s) {
  std::vector<VertexId> members = checked_sorted_members(g, s);
  const CutVolume cv = cut_and_volume(g, members);
  const double other = g.total_volume() - cv.volume;
  const double den = std::min(cv.volume, other);
  if (!(den > 0.0)) {
    throw DomainError("conductance undefined: zero-volume side");
  }
  return cv.cut / den;
}

Cluster Cluster::from_set(const Graph& g, std::span<const VertexId> s) {
  Cluster c;
  c.members_ = checked_sorted_members(g, s);
  const CutVolume cv = cut_and_volume(g, c.members_);
  const double other = g.total_volume() - cv.volume;
  const double den = std::min(cv.volume, other);
  if (!(den > 0.0)) {
    throw DomainError("conductance undefined: zero-volume side");
  }
  c.cut_ = cv.cut;
  c.volume_ = cv.volume;
  c.conductance_ = cv.cut / den;
  return c;
}

bool Cluster::contains(VertexId v) const {
  return std::binary_search(members_.begin(), members_.end(), v);
}

SeedSet SeedSet::from_ids(const Graph& g, std::span<const VertexId> ids) {
  if (ids.empty()) throw DomainError("seed set is empty");
  SeedSet s;
  s.ids.assign(ids.begin(), ids.end());
  std::sort(s.ids.begin(), s.ids.end());
  for (std::size_t i = 0; i < s.ids.size(); ++i) {
    if (s.ids[i] >= g.vertex_count()) {
      throw DomainError("seed " + std::to_string(s.ids[i]) + " out of range");
    }
    if (i > 0 && s.ids[i] == s.ids[i - 1]) {
      throw DomainError("duplicate seed " + std::to_string(s.ids[i]));
    }
    if (!(g.degree(s.ids[i]) > 0.0)) {
      throw DomainError("seed " + std::to_string(s.ids[i]) +
                        " has degree zero");
    }
  }
  return s;
}

Cluster sweep_cut(const Graph& g, const SparseEmbedding& x) {
  if (x.empty()) throw DomainError("sweep over empty embedding");
  auto entries = x.sorted_entries();
  for (const auto& [v, val] : entries) {
    if (v >= g.vertex_count()) {
      throw DomainError("embedding vertex out of range");
    }
    if (!(g.degree(v) > 0.0)) {
      throw DomainError("embedding mass on a degree-zero vertex");
    }
    (void)val;
  }
  // Degree-normalized order, descending; ties broken by ascending id
  // (sorted_entries already yields ascending ids, stable_sort keeps them).
  std::stable_sort(entries.begin(), entries.end(),
                   [&](const auto& a, const auto& b) {
                     return a.second / g.degree(a.first) >
                            b.second / g.degree(b.first);
                   });

  const bool exact = g.integral_weights();
  std::unordered_map<VertexId, std::uint8_t> in_prefix;
  in_prefix.reserve(entries.size());
  for (const auto& e : entries) in_prefix[e.first] = 0;

  double cut = 0.0, vol = 0.0;
  double best_cut = 0.0, best_den = 0.0;
  std::size_t best_prefix = 0;  // number of vertices; 0 = none yet
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const VertexId v = entries[i].first;
    double to_prefix = 0.0;
    g.for_edges_of(v, [&](VertexId u, double w) {
      auto it = in_prefix.find(u);
      if (it != in_prefix.end() && it->second) to_prefix += w;
    });
    cut += g.degree(v) - 2.0 * to_prefix;
    vol += g.degree(v);
    in_prefix[v] = 1;

    if (i + 1 >= g.vertex_count()) break;  // strict subsets only
    const double den = std::min(vol, g.total_volume() - vol);
    if (!(den > 0.0)) continue;
    if (best_prefix == 0 ||
        compare_ratio(cut, den, best_cut, best_den, exact) < 0) {
      best_cut = cut;
      best_den = den;
      best_prefix = i + 1;
    }
  }
  if (best_prefix == 0) {
    throw DomainError("sweep found no strict-subset prefix");
  }
  std::vector<VertexId> members;
  members.reserve(best_prefix);
  for (std::size_t i = 0; i < best_prefix; ++i) {
    members.push_back(entries[i].first);
  }
  return Cluster::from_set(g, members);
}

}  // namespace loclus
