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

#include "loclus/crd.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <unordered_map>
#include <vector>

namespace loclus {

void CrdParams::validate() const {
  if (capacity < 1) throw DomainError("crd capacity U must be >= 1");
  if (height < 1) throw DomainError("crd height h must be >= 1");
  if (rounds < 1) throw DomainError("crd rounds w must be >= 1");
  if (mass_multiplier < 1) throw DomainError("crd mass multiplier must be >= 1");
}

namespace {

std::int64_t int_degree(const Graph& g, VertexId v) {
  return std::llround(g.degree(v));
}

// Per-round unit-flow state, allocated only for touched vertices.
struct UnitFlowState {
  std::unordered_map<VertexId, std::int64_t> mass;
  std::unordered_map<VertexId, int> label;
  std::unordered_map<VertexId, std::uint32_t> arc_ptr;
  // Net flow this round on each edge, keyed by the low endpoint,
  // oriented low -> high.
  std::unordered_map<std::uint64_t, std::int64_t> edge_flow;

  static std::uint64_t edge_key(VertexId u, VertexId v) {
    const VertexId lo = std::min(u, v), hi = std::max(u, v);
    return (static_cast<std::uint64_t>(lo) << 32) | hi;
  }

  std::int64_t residual(VertexId from, VertexId to, std::int64_t cap) const {
    auto it = edge_flow.find(edge_key(from, to));
    const std::int64_t f = it == edge_flow.end() ? 0 : it->second;
    return from < to ? cap - f : cap + f;
  }

  void send(VertexId from, VertexId to, std::int64_t amount) {
    edge_flow[edge_key(from, to)] += from < to ? amount : -amount;
  }
};

}  // namespace

Cluster crd_cluster(const Graph& g, const SeedSet& seeds,
                    const CrdParams& params) {
  params.validate();
  if (!g.integral_weights()) {
    throw DomainError("crd requires integral edge weights");
  }

  // Overflow guard: the heaviest vertex doubled every round must stay well
  // inside 63 bits.
  double max_deg = 0.0;
  for (VertexId s : seeds.ids) max_deg = std::max(max_deg, g.degree(s));
  const double worst = static_cast<double>(params.mass_multiplier) * max_deg *
                       std::ldexp(1.0, params.rounds) *
                       static_cast<double>(seeds.ids.size());
  if (worst > 0x1p61) throw DomainError("crd parameters overflow mass units");

  UnitFlowState st;
  std::int64_t total_mass = 0;
  for (VertexId s : seeds.ids) {
    const std::int64_t m = params.mass_multiplier * int_degree(g, s);
    st.mass[s] += m;
    total_mass += m;
  }

  auto excess = [&](VertexId v) {
    const std::int64_t m = st.mass.count(v) ? st.mass.at(v) : 0;
    return std::max<std::int64_t>(0, m - int_degree(g, v));
  };
  auto audit = [&]() {
    std::int64_t sum = 0;
    for (const auto& [v, m] : st.mass) {
      if (m < 0) throw std::logic_error("crd: negative mass");
      const std::int64_t absorbed = std::min(m, int_degree(g, v));
      if (absorbed > int_degree(g, v)) {
        throw std::logic_error("crd: absorbed mass exceeds degree");
      }
      sum += m;
    }
    if (sum != total_mass) {
      throw std::logic_error("crd: mass not conserved (" +
                             std::to_string(sum) + " vs " +
                             std::to_string(total_mass) + ")");
    }
  };

  for (int round = 0; round < params.rounds; ++round) {
    st.label.clear();
    st.arc_ptr.clear();
    st.edge_flow.clear();

    // Lowest-label-first buckets with FIFO tie-break.
    std::vector<std::deque<VertexId>> buckets(params.height + 1);
    auto activate = [&](VertexId v, int lvl) { buckets[lvl].push_back(v); };
    {
      std::vector<VertexId> init;
      for (const auto& [v, m] : st.mass) {
        if (m > int_degree(g, v)) init.push_back(v);
      }
      std::sort(init.begin(), init.end());
      for (VertexId v : init) activate(v, 0);
    }

    audit();
    std::uint64_t pops = 0;
    while (true) {
      int lvl = -1;
      for (int l = 0; l < params.height; ++l) {
        if (!buckets[l].empty()) {
          lvl = l;
          break;
        }
      }
      if (lvl < 0) break;
      const VertexId v = buckets[lvl].front();
      buckets[lvl].pop_front();
      int& lv = st.label[v];
      if (lv != lvl || excess(v) == 0) continue;  // stale entry

      ++pops;
      if (pops % 64 == 0) audit();

      // Push along the current-arc neighbor list; relabel when exhausted.
      const auto nbrs = g.neighbors(v);
      std::uint32_t& ptr = st.arc_ptr[v];
      bool pushed = false;
      while (ptr < nbrs.size()) {
        const VertexId u = nbrs[ptr];
        const int lu = st.label.count(u) ? st.label.at(u) : 0;
        std::int64_t w = 1;
        if (!g.unit_weights()) {
          // weight lookup for the current arc
          std::int64_t acc = 0;
          g.for_edges_of(v, [&](VertexId x, double wx) {
            if (x == u) acc = std::llround(wx);
          });
          w = acc;
        }
        const std::int64_t cap = params.capacity * w;
        const std::int64_t res = st.residual(v, u, cap);
        if (lv == lu + 1 && res > 0) {
          const std::int64_t amount = std::min(excess(v), res);
          st.mass[v] -= amount;
          st.mass[u] += amount;
          st.send(v, u, amount);
          if (excess(u) > 0 && lu < params.height) activate(u, lu);
          if (excess(v) > 0) activate(v, lv);
          pushed = true;
          break;
        }
        ++ptr;
      }
      if (!pushed) {
        ++lv;
        ptr = 0;
        // At the height limit the vertex keeps its excess; the diffusion
        // is blocked there.
        if (lv < params.height) activate(v, lv);
      }
    }
    audit();

    std::int64_t trapped = 0;
    for (const auto& [v, m] : st.mass) trapped += std::max<std::int64_t>(
        0, m - int_degree(g, v));
    if (trapped > 0) break;  // bottleneck found; stop spreading

    if (round + 1 < params.rounds) {
      for (auto& [v, m] : st.mass) m *= 2;
      total_mass *= 2;
    }
  }

  SparseEmbedding settled;
  for (const auto& [v, m] : st.mass) {
    const std::int64_t absorbed = std::min(m, int_degree(g, v));
    if (absorbed > 0) settled.set(v, static_cast<double>(absorbed));
  }
  if (settled.empty()) {
    throw DomainError("crd settled no mass; cannot extract a cluster");
  }
  return sweep_cut(g, settled);
}

}  // namespace loclus
