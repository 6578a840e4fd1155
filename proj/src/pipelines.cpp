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

#include "loclus/pipelines.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <thread>
#include <unordered_set>

#include "loclus/rng.hpp"

namespace loclus {

namespace {

struct SizeBin {
  std::size_t lo, hi;
};

std::vector<SizeBin> log_spaced_bins(std::size_t n, std::size_t bins) {
  // Sizes are vertex counts; any strict subset is a legal cluster, so the
  // profile spans [1, n-1] (conductance always uses the min-volume side).
  const std::size_t max_size = std::max<std::size_t>(1, n - 1);
  std::vector<SizeBin> out;
  std::size_t lo = 1;
  for (std::size_t i = 0; i < bins && lo <= max_size; ++i) {
    const double raw = std::pow(static_cast<double>(max_size),
                                static_cast<double>(i + 1) /
                                    static_cast<double>(bins));
    std::size_t hi = std::max(lo, static_cast<std::size_t>(raw));
    if (i + 1 == bins) hi = max_size;
    hi = std::min(hi, max_size);
    out.push_back({lo, hi});
    lo = hi + 1;
  }
  return out;
}

VertexId sample_seed(const std::vector<VertexId>& positive,
                     const std::vector<double>& degree_prefix, bool by_degree,
                     Rng& rng) {
  if (!by_degree) {
    return positive[rng.uniform_below(positive.size())];
  }
  const double x = rng.uniform01() * degree_prefix.back();
  const auto it =
      std::upper_bound(degree_prefix.begin(), degree_prefix.end(), x);
  const std::size_t i =
      std::min<std::size_t>(it - degree_prefix.begin(), positive.size() - 1);
  return positive[i];
}

struct GridPoint {
  double alpha = 0.0, eps = 0.0, rho = 0.0;
};

std::vector<GridPoint> make_grid(const NcpOptions& o) {
  std::vector<GridPoint> grid;
  if (o.method == "acl") {
    for (double a : o.alphas)
      for (double e : o.epses) grid.push_back({a, e, 0.0});
  } else if (o.method == "l1reg") {
    for (double a : o.alphas)
      for (double r : o.rhos) grid.push_back({a, 0.0, r});
  } else {
    throw DomainError("ncp method must be acl or l1reg");
  }
  return grid;
}

}  // namespace

std::vector<NcpRecord> compute_ncp(const Graph& g, const NcpOptions& o) {
  if (o.bins < 1) throw DomainError("ncp needs at least one bin");
  if (o.seeds_per_bin < 1) throw DomainError("seeds_per_bin must be >= 1");
  const std::vector<GridPoint> grid = make_grid(o);

  std::vector<VertexId> positive;
  std::vector<double> degree_prefix;
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    if (g.degree(v) > 0.0) {
      positive.push_back(static_cast<VertexId>(v));
      degree_prefix.push_back(
          (degree_prefix.empty() ? 0.0 : degree_prefix.back()) + g.degree(v));
    }
  }
  if (positive.empty()) throw DomainError("graph has no positive-degree vertex");

  const std::vector<SizeBin> bins = log_spaced_bins(g.vertex_count(), o.bins);

  // One task per (bin, seed slot); tasks are independent and each consumes
  // only its own derived RNG stream, so scheduling cannot change results.
  struct Task {
    std::size_t bin_index, seed_slot;
  };
  std::vector<Task> tasks;
  for (std::size_t b = 0; b < bins.size(); ++b) {
    for (std::size_t j = 0; j < o.seeds_per_bin; ++j) tasks.push_back({b, j});
  }
  std::vector<std::vector<NcpRecord>> task_records(tasks.size());

  auto run_task = [&](std::size_t t) {
    const auto [b, j] = tasks[t];
    const SizeBin bin = bins[b];
    Rng rng = Rng::stream(o.rng_seed, b, j);
    const VertexId seed =
        sample_seed(positive, degree_prefix, o.degree_biased_seeds, rng);
    const SeedSet seeds = SeedSet::from_ids(g, std::vector<VertexId>{seed});
    for (const GridPoint& gp : grid) {
      DiffusionParams params;
      params.alpha = gp.alpha;
      params.max_iters = o.l1_max_iters;
      params.kkt_tol = o.l1_kkt_tol;
      std::optional<Cluster> cluster;
      try {
        if (o.method == "acl") {
          params.eps = gp.eps;
          const PushResult pr = approximate_pagerank(g, seeds, params);
          if (pr.p.empty()) continue;
          cluster = sweep_cut(g, pr.p);
        } else {
          params.rho = gp.rho;
          const SparseEmbedding q = l1reg_pagerank(g, seeds, params);
          if (q.empty()) continue;
          cluster = sweep_cut(g, q);
        }
      } catch (const SolverError& e) {
        std::fprintf(stderr, "ncp: grid point skipped: %s\n", e.what());
        continue;
      }
      if (cluster->size() < bin.lo || cluster->size() > bin.hi) continue;
      NcpRecord rec;
      rec.bin_lo = bin.lo;
      rec.bin_hi = bin.hi;
      rec.found = true;
      rec.method = o.method;
      rec.seed = seed;
      rec.alpha = gp.alpha;
      rec.eps = gp.eps;
      rec.rho = gp.rho;
      rec.cluster_size = cluster->size();
      rec.cluster_volume = cluster->volume();
      rec.cut = cluster->cut();
      rec.conductance = cluster->conductance();
      rec.cluster = std::move(*cluster);
      task_records[t].push_back(std::move(rec));
    }
  };

  const int threads =
      std::max(1, std::min<int>(o.threads, static_cast<int>(tasks.size())));
  if (threads == 1) {
    for (std::size_t t = 0; t < tasks.size(); ++t) run_task(t);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int w = 0; w < threads; ++w) {
      pool.emplace_back([&]() {
        while (true) {
          const std::size_t t = next.fetch_add(1);
          if (t >= tasks.size()) return;
          run_task(t);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  // Reduce in deterministic (bin, seed slot, grid) order.
  std::vector<NcpRecord> out;
  const bool exact = g.integral_weights();
  for (std::size_t b = 0; b < bins.size(); ++b) {
    const NcpRecord* best = nullptr;
    for (std::size_t j = 0; j < o.seeds_per_bin; ++j) {
      const std::size_t t = b * o.seeds_per_bin + j;
      for (const NcpRecord& rec : task_records[t]) {
        if (o.all_records) out.push_back(rec);
        if (best == nullptr ||
            compare_ratio(rec.cut,
                          std::min(rec.cluster_volume,
                                   g.total_volume() - rec.cluster_volume),
                          best->cut,
                          std::min(best->cluster_volume,
                                   g.total_volume() - best->cluster_volume),
                          exact) < 0) {
          best = &rec;
        }
      }
    }
    if (!o.all_records) {
      if (best != nullptr) {
        out.push_back(*best);
      } else {
        NcpRecord empty;
        empty.bin_lo = bins[b].lo;
        empty.bin_hi = bins[b].hi;
        empty.method = o.method;
        out.push_back(std::move(empty));
      }
    } else if (best == nullptr) {
      NcpRecord empty;
      empty.bin_lo = bins[b].lo;
      empty.bin_hi = bins[b].hi;
      empty.method = o.method;
      out.push_back(std::move(empty));
    }
  }
  return out;
}

LabelAssignment predict_labels(const Graph& g,
                               const std::map<std::int32_t, SeedSet>& classes,
                               const DiffusionParams& params,
                               SpectralMethod method) {
  if (classes.empty()) throw DomainError("no classes given");
  std::unordered_set<VertexId> seen;
  for (const auto& [cid, seeds] : classes) {
    if (seeds.ids.empty()) {
      throw DomainError("class " + std::to_string(cid) + " has no seeds");
    }
    for (VertexId v : seeds.ids) {
      if (!seen.insert(v).second) {
        throw DomainError("seed sets overlap at vertex " + std::to_string(v));
      }
    }
  }

  LabelAssignment out;
  out.labels.assign(g.vertex_count(), LabelAssignment::kUnlabeled);
  out.scores.assign(g.vertex_count(), 0.0);

  std::unordered_map<VertexId, std::pair<std::int32_t, double>> pinned;
  for (const auto& [cid, seeds] : classes) {  // ascending class id
    SparseEmbedding x;
    if (method == SpectralMethod::kAcl) {
      x = approximate_pagerank(g, seeds, params).p;
    } else {
      x = l1reg_pagerank(g, seeds, params);
    }
    for (const auto& [v, val] : x.entries()) {
      const double score = val / g.degree(v);
      // Strict improvement keeps the lowest class id on ties.
      if (out.labels[v] == LabelAssignment::kUnlabeled ||
          score > out.scores[v]) {
        out.labels[v] = cid;
        out.scores[v] = score;
      }
    }
    for (VertexId s : seeds.ids) {
      pinned[s] = {cid, x.value(s) / g.degree(s)};
    }
  }

  // Seeded vertices always keep their seed class.
  for (const auto& [s, cls] : pinned) {
    out.labels[s] = cls.first;
    out.scores[s] = cls.second;
  }
  return out;
}

RecoveryScore evaluate_recovery(const Graph& g, const Cluster& found,
                                const Cluster& target) {
  std::vector<VertexId> inter;
  std::set_intersection(found.members().begin(), found.members().end(),
                        target.members().begin(), target.members().end(),
                        std::back_inserter(inter));
  double vol_inter = 0.0;
  for (VertexId v : inter) vol_inter += g.degree(v);

  RecoveryScore s;
  s.precision = found.volume() > 0.0 ? vol_inter / found.volume() : 0.0;
  s.recall = target.volume() > 0.0 ? vol_inter / target.volume() : 0.0;
  s.precision_cardinality =
      static_cast<double>(inter.size()) / static_cast<double>(found.size());
  s.recall_cardinality =
      static_cast<double>(inter.size()) / static_cast<double>(target.size());
  return s;
}

Graph ring_of_cliques(std::size_t k, std::size_t c) {
  if (c < 2) throw DomainError("ring_of_cliques needs cliques of size >= 2");
  if (k < 1) throw DomainError("ring_of_cliques needs at least one clique");
  std::vector<Edge> edges;
  edges.reserve(k * c * (c - 1) / 2 + k);
  for (std::size_t i = 0; i < k; ++i) {
    const VertexId base = static_cast<VertexId>(i * c);
    for (std::size_t a = 0; a < c; ++a) {
      for (std::size_t b = a + 1; b < c; ++b) {
        edges.push_back({base + static_cast<VertexId>(a),
                         base + static_cast<VertexId>(b)});
      }
    }
    // Last vertex of clique i to first vertex of clique i+1.
    const VertexId from = base + static_cast<VertexId>(c - 1);
    const VertexId to = static_cast<VertexId>(((i + 1) % k) * c);
    edges.push_back({from, to});
  }
  return Graph::from_edges(edges, /*weighted=*/false, k * c);
}

Graph planted_partition(std::size_t blocks, std::size_t block_size,
                        double p_in, double p_out, std::uint64_t rng_seed) {
  if (blocks < 1 || block_size < 1 || blocks * block_size < 2) {
    throw DomainError("planted_partition needs at least two vertices");
  }
  if (!(p_in >= 0.0 && p_in <= 1.0) || !(p_out >= 0.0 && p_out <= 1.0)) {
    throw DomainError("edge probabilities must lie in [0,1]");
  }
  const std::size_t n = blocks * block_size;
  Rng rng(rng_seed);
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double p = (i / block_size == j / block_size) ? p_in : p_out;
      if (rng.uniform01() < p) {
        edges.push_back(
            {static_cast<VertexId>(i), static_cast<VertexId>(j)});
      }
    }
  }
  return Graph::from_edges(edges, /*weighted=*/false, n);
}

Graph random_geometric(std::size_t n, double radius, std::uint64_t rng_seed) {
  if (n < 2) throw DomainError("random_geometric needs n >= 2");
  if (!(radius > 0.0)) throw DomainError("radius must be positive");
  Rng rng(rng_seed);
  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = rng.uniform01();
    y[i] = rng.uniform01();
  }
  const double r2 = radius * radius;
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dx = x[i] - x[j], dy = y[i] - y[j];
      if (dx * dx + dy * dy <= r2) {
        edges.push_back(
            {static_cast<VertexId>(i), static_cast<VertexId>(j)});
      }
    }
  }
  return Graph::from_edges(edges, /*weighted=*/false, n);
}

Graph disjoint_union(std::span<const Graph> parts) {
  if (parts.empty()) throw DomainError("disjoint_union of nothing");
  bool weighted = false;
  for (const Graph& p : parts) weighted |= !p.unit_weights();
  std::vector<Edge> edges;
  std::size_t offset = 0;
  for (const Graph& p : parts) {
    for (std::size_t v = 0; v < p.vertex_count(); ++v) {
      p.for_edges_of(static_cast<VertexId>(v), [&](VertexId u, double w) {
        if (u > v) {
          edges.push_back({static_cast<VertexId>(v + offset),
                           static_cast<VertexId>(u + offset), w});
        }
      });
    }
    offset += p.vertex_count();
  }
  return Graph::from_edges(edges, weighted, offset);
}

Graph generate_synthetic(const SyntheticSpec& spec, std::uint64_t rng_seed) {
  switch (spec.kind) {
    case SyntheticKind::kRingOfCliques:
      return ring_of_cliques(spec.k, spec.c);
    case SyntheticKind::kPlantedPartition:
      return planted_partition(spec.blocks, spec.block_size, spec.p_in,
                               spec.p_out, rng_seed);
    case SyntheticKind::kRandomGeometric:
      return random_geometric(spec.n, spec.radius, rng_seed);
  }
  throw DomainError("unknown synthetic graph kind");
}

}  // namespace loclus
