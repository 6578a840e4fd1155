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

#include "loclus/flow.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <limits>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

namespace loclus {

namespace {

constexpr std::int64_t kMaxCap = std::int64_t{1} << 62;

std::int64_t checked_cap(__int128 x) {
  if (x < 0 || x > kMaxCap) {
    throw SolverError("flow capacity exceeds the 63-bit integer budget");
  }
  return static_cast<std::int64_t>(x);
}

}  // namespace

FlowNetwork::FlowNetwork(std::size_t node_count, int source, int sink)
    : heads_(node_count),
      level_(node_count, -1),
      iter_(node_count, 0),
      reached_(node_count, 0),
      source_(source),
      sink_(sink) {
  if (source < 0 || sink < 0 ||
      static_cast<std::size_t>(source) >= node_count ||
      static_cast<std::size_t>(sink) >= node_count || source == sink) {
    throw DomainError("flow network needs distinct source and sink nodes");
  }
}

int FlowNetwork::add_node() {
  heads_.emplace_back();
  level_.push_back(-1);
  iter_.push_back(0);
  reached_.push_back(0);
  return static_cast<int>(heads_.size()) - 1;
}

void FlowNetwork::add_arc(int from, int to, std::int64_t cap,
                          std::int64_t reverse_cap) {
  if (from < 0 || to < 0 || static_cast<std::size_t>(from) >= heads_.size() ||
      static_cast<std::size_t>(to) >= heads_.size() || from == to) {
    throw DomainError("flow arc endpoints out of range");
  }
  if (cap < 0 || cap > kMaxCap || reverse_cap < 0 || reverse_cap > kMaxCap) {
    throw SolverError("flow capacity exceeds the 63-bit integer budget");
  }
  if ((to == source_ && cap > 0) || (from == source_ && reverse_cap > 0)) {
    throw DomainError("source must have no in-capacity");
  }
  if ((from == sink_ && cap > 0) || (to == sink_ && reverse_cap > 0)) {
    throw DomainError("sink must have no out-capacity");
  }
  const auto id = static_cast<std::uint32_t>(to_.size());
  to_.push_back(to);
  cap_.push_back(cap);
  cap0_.push_back(cap);
  heads_[from].push_back(id);
  to_.push_back(from);
  cap_.push_back(reverse_cap);
  cap0_.push_back(reverse_cap);
  heads_[to].push_back(id + 1);
}

void FlowNetwork::reach(int u) {
  if (!reached_[u]) {
    reached_[u] = 1;
    ++reached_count_;
    if (materialize_) materialize_(*this, u);
  }
}

bool FlowNetwork::bfs_levels() {
  level_.assign(heads_.size(), -1);
  iter_.assign(heads_.size(), 0);
  std::deque<int> queue;
  reach(source_);
  level_[source_] = 0;
  queue.push_back(source_);
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    // Index loop: reach() below may append arcs to heads_[u].
    for (std::size_t i = 0; i < heads_[u].size(); ++i) {
      const std::uint32_t id = heads_[u][i];
      if (cap_[id] <= 0) continue;
      const int v = to_[id];
      if (level_[v] != -1) continue;
      reach(v);
      level_[v] = level_[u] + 1;
      queue.push_back(v);
    }
  }
  return level_[sink_] != -1;
}

std::int64_t FlowNetwork::dfs_augment(int u, std::int64_t limit) {
  if (u == sink_) return limit;
  for (; iter_[u] < heads_[u].size(); ++iter_[u]) {
    const std::uint32_t id = heads_[u][iter_[u]];
    const int v = to_[id];
    if (cap_[id] <= 0 || level_[v] != level_[u] + 1) continue;
    const std::int64_t pushed = dfs_augment(v, std::min(limit, cap_[id]));
    if (pushed > 0) {
      cap_[id] -= pushed;
      cap_[id ^ 1] += pushed;
      return pushed;
    }
  }
  return 0;
}

FlowNetwork::Result FlowNetwork::max_flow() {
  Result res;
  while (bfs_levels()) {
    while (true) {
      const std::int64_t pushed =
          dfs_augment(source_, std::numeric_limits<std::int64_t>::max());
      if (pushed == 0) break;
      res.value += pushed;
    }
  }
  // The last BFS failed to reach the sink; its levels mark the canonical
  // minimal source side.
  std::int64_t cut = 0;
  for (std::size_t u = 0; u < heads_.size(); ++u) {
    if (level_[u] == -1) continue;
    res.source_side.push_back(static_cast<int>(u));
    for (const std::uint32_t id : heads_[u]) {
      if (level_[to_[id]] == -1) cut += cap0_[id];
    }
  }
  if (cut != res.value) {
    throw std::logic_error("max-flow/min-cut certificate failed: flow " +
                           std::to_string(res.value) + " vs cut " +
                           std::to_string(cut));
  }
  res.reached_nodes = reached_count_;
  return res;
}

namespace {

// Flow methods run on exact integers. Integral weights pass through
// unscaled; fractional weights are cleared by the smallest power of ten
// up to 1e6 that makes every weight integral.
std::int64_t weight_scale(const Graph& g) {
  if (g.integral_weights()) return 1;
  for (std::int64_t scale = 10; scale <= 1000000; scale *= 10) {
    bool ok = true;
    for (std::size_t v = 0; v < g.vertex_count() && ok; ++v) {
      g.for_edges_of(static_cast<VertexId>(v), [&](VertexId, double w) {
        const double s = w * static_cast<double>(scale);
        if (std::abs(s - std::llround(s)) > 1e-9 * std::max(1.0, s)) {
          ok = false;
        }
      });
    }
    if (ok) return scale;
  }
  throw SolverError(
      "flow methods need weights that are integral after scaling by at "
      "most 1e6");
}

std::int64_t scaled(double x, std::int64_t scale) {
  return std::llround(x * static_cast<double>(scale));
}

std::int64_t gcd_reduce(std::int64_t& p, std::int64_t& q) {
  const std::int64_t g = std::gcd(p, q);
  if (g > 1) {
    p /= g;
    q /= g;
  }
  return g;
}

struct IntCutVolume {
  std::int64_t cut = 0;
  std::int64_t volume = 0;
};

IntCutVolume int_cut_and_volume(const Graph& g,
                                const std::vector<VertexId>& members,
                                std::int64_t scale) {
  std::unordered_set<VertexId> in_set(members.begin(), members.end());
  IntCutVolume cv;
  for (VertexId v : members) {
    cv.volume += scaled(g.degree(v), scale);
    g.for_edges_of(v, [&](VertexId u, double w) {
      if (!in_set.count(u)) cv.cut += scaled(w, scale);
    });
  }
  return cv;
}

std::vector<VertexId> complement_members(const Graph& g,
                                         const std::vector<VertexId>& a) {
  std::vector<std::uint8_t> in_a(g.vertex_count(), 0);
  for (VertexId v : a) in_a[v] = 1;
  std::vector<VertexId> out;
  out.reserve(g.vertex_count() - a.size());
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    if (!in_a[v]) out.push_back(static_cast<VertexId>(v));
  }
  return out;
}

// Compares cluster conductances exactly: cut/den in integer arithmetic.
bool strictly_better(const Graph& g, const Cluster& c, const Cluster& best,
                     std::int64_t scale) {
  const std::int64_t c_cut = scaled(c.cut(), scale);
  const std::int64_t c_den =
      scaled(std::min(c.volume(), g.total_volume() - c.volume()), scale);
  const std::int64_t b_cut = scaled(best.cut(), scale);
  const std::int64_t b_den =
      scaled(std::min(best.volume(), g.total_volume() - best.volume()), scale);
  return static_cast<__int128>(c_cut) * b_den <
         static_cast<__int128>(b_cut) * c_den;
}

}  // namespace

ImproveResult mqi(const Graph& g, const Cluster& a) {
  const std::int64_t scale = weight_scale(g);
  const std::int64_t ivol_total = scaled(g.total_volume(), scale);

  ImproveResult result;
  std::vector<VertexId> base = a.members();
  if (2 * scaled(a.volume(), scale) > ivol_total) {
    std::fprintf(stderr,
                 "mqi: cluster volume exceeds half the graph; improving the "
                 "complement\n");
    base = complement_members(g, base);
    result.complemented = true;
  }

  const std::size_t k = base.size();
  std::unordered_map<VertexId, int> index;
  index.reserve(k);
  for (std::size_t i = 0; i < k; ++i) index[base[i]] = static_cast<int>(i);

  // Boundary weight of each member w.r.t. the fixed base set.
  std::vector<std::int64_t> boundary(k, 0), deg(k, 0);
  for (std::size_t i = 0; i < k; ++i) {
    deg[i] = scaled(g.degree(base[i]), scale);
    g.for_edges_of(base[i], [&](VertexId u, double w) {
      if (!index.count(u)) boundary[i] += scaled(w, scale);
    });
  }

  std::vector<VertexId> candidate = base;
  Cluster current = Cluster::from_set(g, candidate);
  result.conductance_trace.push_back(current.conductance());

  IntCutVolume cv = int_cut_and_volume(g, candidate, scale);
  std::int64_t p = cv.cut, q = cv.volume;  // current best ratio p/q
  gcd_reduce(p, q);

  while (p > 0) {
    ++result.iterations;
    const int s = static_cast<int>(k), t = static_cast<int>(k) + 1;
    FlowNetwork net(k + 2, s, t);
    for (std::size_t i = 0; i < k; ++i) {
      net.add_arc(s, static_cast<int>(i),
                  checked_cap(static_cast<__int128>(p) * deg[i]));
      if (boundary[i] > 0) {
        net.add_arc(static_cast<int>(i), t,
                    checked_cap(static_cast<__int128>(q) * boundary[i]));
      }
      g.for_edges_of(base[i], [&](VertexId u, double w) {
        auto it = index.find(u);
        if (it == index.end() || it->second <= static_cast<int>(i)) return;
        const std::int64_t cap =
            checked_cap(static_cast<__int128>(q) * scaled(w, scale));
        net.add_arc(static_cast<int>(i), it->second, cap, cap);
      });
    }
    const std::int64_t vol_base = std::accumulate(deg.begin(), deg.end(),
                                                  std::int64_t{0});
    const std::int64_t baseline =
        checked_cap(static_cast<__int128>(p) * vol_base);
    const FlowNetwork::Result flow = net.max_flow();
    result.touched = std::max(result.touched, k);
    if (flow.value >= baseline) break;

    std::vector<VertexId> improved;
    for (int node : flow.source_side) {
      if (node < static_cast<int>(k)) improved.push_back(base[node]);
    }
    std::sort(improved.begin(), improved.end());
    if (improved.empty() || improved.size() == candidate.size()) {
      throw std::logic_error("mqi: degenerate min cut");
    }
    const IntCutVolume next = int_cut_and_volume(g, improved, scale);
    if (static_cast<__int128>(next.cut) * q >=
        static_cast<__int128>(p) * next.volume) {
      throw std::logic_error("mqi: round failed to improve the quotient");
    }
    candidate = std::move(improved);
    current = Cluster::from_set(g, candidate);
    result.conductance_trace.push_back(current.conductance());
    p = next.cut;
    q = next.volume;
    gcd_reduce(p, q);
  }

  result.cluster = std::move(current);
  return result;
}

namespace {

// Shared Dinkelbach engine for FlowImprove and SimpleLocal: minimizes
// cut(S) / (vol(S cap A) - theta * vol(S minus A)) with
// theta = vol(A)/vol(~A) + delta, delta = delta_num/delta_den >= 0.
// Each round solves one max-flow decision problem; `lazy` materializes the
// network only where the search actually goes.
ImproveResult improve_relative(const Graph& g, const Cluster& a,
                               std::int64_t delta_num, std::int64_t delta_den,
                               bool lazy, const char* name) {
  const std::int64_t scale = weight_scale(g);
  const std::int64_t ivol_total = scaled(g.total_volume(), scale);

  ImproveResult result;
  std::vector<VertexId> base = a.members();
  if (2 * scaled(a.volume(), scale) > ivol_total) {
    std::fprintf(stderr,
                 "%s: cluster volume exceeds half the graph; improving the "
                 "complement\n",
                 name);
    base = complement_members(g, base);
    result.complemented = true;
  }

  const IntCutVolume base_cv = int_cut_and_volume(g, base, scale);
  const std::int64_t ivol_a = base_cv.volume;
  const std::int64_t ivol_bar = ivol_total - ivol_a;

  Cluster best = Cluster::from_set(g, base);
  result.conductance_trace.push_back(best.conductance());
  if (base_cv.cut == 0) {
    result.cluster = std::move(best);
    return result;
  }

  const std::int64_t cap_d =
      checked_cap(static_cast<__int128>(ivol_bar) * delta_den);
  const std::int64_t theta_num =
      checked_cap(static_cast<__int128>(ivol_a) * delta_den +
                  static_cast<__int128>(delta_num) * ivol_bar);

  std::unordered_set<VertexId> in_a(base.begin(), base.end());
  std::vector<VertexId> candidate = base;
  std::int64_t p = base_cv.cut, q = ivol_a;  // objective value p/q, scaled
  gcd_reduce(p, q);

  for (int round = 0; round < 10000; ++round) {
    ++result.iterations;
    // Coefficients of the scaled decision problem
    //   ce*cut(S) - cs*vol(S cap A) + ct*vol(S minus A) < 0.
    std::int64_t ce = checked_cap(static_cast<__int128>(q) * cap_d);
    std::int64_t cs = checked_cap(static_cast<__int128>(p) * cap_d);
    std::int64_t ct = checked_cap(static_cast<__int128>(p) * theta_num);
    const std::int64_t gg = std::gcd(std::gcd(ce, cs), ct);
    if (gg > 1) {
      ce /= gg;
      cs /= gg;
      ct /= gg;
    }

    FlowNetwork net(2, 0, 1);
    std::unordered_map<VertexId, int> node_of;
    std::vector<VertexId> vertex_of;
    auto ensure_node = [&](VertexId v) {
      auto it = node_of.find(v);
      if (it != node_of.end()) return it->second;
      const int id = net.add_node();
      node_of.emplace(v, id);
      vertex_of.push_back(v);
      return id;
    };
    auto materialize = [&](FlowNetwork& fn, int node) {
      if (node < 2) return;
      const VertexId v = vertex_of[node - 2];
      if (!in_a.count(v)) {
        fn.add_arc(node, 1,
                   checked_cap(static_cast<__int128>(ct) *
                               scaled(g.degree(v), scale)));
      }
      g.for_edges_of(v, [&](VertexId u, double w) {
        const int nu = ensure_node(u);
        if (fn.reached(nu)) return;  // pair added when u materialized
        const std::int64_t cap =
            checked_cap(static_cast<__int128>(ce) * scaled(w, scale));
        fn.add_arc(node, nu, cap, cap);
      });
    };

    for (VertexId v : base) {
      const int nv = ensure_node(v);
      net.add_arc(0, nv,
                  checked_cap(static_cast<__int128>(cs) *
                              scaled(g.degree(v), scale)));
    }
    if (lazy) {
      net.set_materializer(materialize);
    } else {
      for (std::size_t v = 0; v < g.vertex_count(); ++v) {
        if (!(g.degree(v) > 0.0)) continue;
        const VertexId vid = static_cast<VertexId>(v);
        const int nv = ensure_node(vid);
        if (!in_a.count(vid)) {
          net.add_arc(nv, 1,
                      checked_cap(static_cast<__int128>(ct) *
                                  scaled(g.degree(vid), scale)));
        }
        g.for_edges_of(vid, [&](VertexId u, double w) {
          if (u <= vid) return;
          const std::int64_t cap =
              checked_cap(static_cast<__int128>(ce) * scaled(w, scale));
          net.add_arc(nv, ensure_node(u), cap, cap);
        });
      }
    }

    const std::int64_t baseline =
        checked_cap(static_cast<__int128>(cs) * ivol_a);
    const FlowNetwork::Result flow = net.max_flow();
    result.touched = std::max(
        result.touched, flow.reached_nodes > 2 ? flow.reached_nodes - 2 : 0);
    if (flow.value >= baseline) break;

    std::vector<VertexId> improved;
    for (int node : flow.source_side) {
      if (node >= 2) improved.push_back(vertex_of[node - 2]);
    }
    std::sort(improved.begin(), improved.end());
    if (improved.empty()) throw std::logic_error("improve: empty min cut");

    // New objective value for the improved set.
    const IntCutVolume next = int_cut_and_volume(g, improved, scale);
    std::int64_t vol_in = 0;
    for (VertexId v : improved) {
      if (in_a.count(v)) vol_in += scaled(g.degree(v), scale);
    }
    const std::int64_t vol_out = next.volume - vol_in;
    const __int128 den = static_cast<__int128>(cap_d) * vol_in -
                         static_cast<__int128>(theta_num) * vol_out;
    if (den <= 0) throw std::logic_error("improve: non-positive denominator");
    const __int128 num = static_cast<__int128>(cap_d) * next.cut;
    if (num * q >= static_cast<__int128>(p) * den) {
      throw std::logic_error("improve: round failed to improve objective");
    }
    p = checked_cap(num);
    q = checked_cap(den);
    gcd_reduce(p, q);
    candidate = std::move(improved);

    // Track the best-conductance iterate; the trace keeps the strictly
    // decreasing running minima.
    if (candidate.size() < g.vertex_count()) {
      Cluster c = Cluster::from_set(g, candidate);
      if (strictly_better(g, c, best, scale)) {
        best = std::move(c);
        result.conductance_trace.push_back(best.conductance());
      }
    }
    if (p == 0) break;  // conductance 0; nothing can improve further
  }

  result.cluster = std::move(best);
  return result;
}

}  // namespace

ImproveResult flow_improve(const Graph& g, const Cluster& a) {
  return improve_relative(g, a, 0, 1, /*lazy=*/false, "flow_improve");
}

ImproveResult simple_local(const Graph& g, const Cluster& a, double delta) {
  if (!(delta >= 0.0) || !std::isfinite(delta)) {
    throw DomainError("delta must be finite and >= 0");
  }
  std::int64_t den = 1;
  while (den <= 1000000) {
    const double scaled_delta = delta * static_cast<double>(den);
    if (std::abs(scaled_delta - std::llround(scaled_delta)) <=
        1e-9 * std::max(1.0, scaled_delta)) {
      std::int64_t num = std::llround(scaled_delta);
      gcd_reduce(num, den);
      return improve_relative(g, a, num, den, /*lazy=*/true, "simple_local");
    }
    den *= 10;
  }
  throw DomainError("delta must be a decimal with at most 6 places");
}

}  // namespace loclus
