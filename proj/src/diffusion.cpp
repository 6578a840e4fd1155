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

#include "loclus/diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <string>
#include <unordered_set>

namespace loclus {

void DiffusionParams::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw DomainError("alpha must lie in (0,1)");
  }
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw DomainError("eps must be positive and finite");
  }
  if (!(rho > 0.0) || !std::isfinite(rho)) {
    throw DomainError("rho must be positive and finite");
  }
  if (max_iters < 1) throw DomainError("max_iters must be >= 1");
  if (!(kkt_tol > 0.0)) throw DomainError("kkt_tol must be positive");
}

namespace {

SparseEmbedding seed_vector(const Graph& g, const SeedSet& seeds,
                            bool degree_weighted) {
  SparseEmbedding s;
  if (degree_weighted) {
    double vol = 0.0;
    for (VertexId v : seeds.ids) vol += g.degree(v);
    for (VertexId v : seeds.ids) s.set(v, g.degree(v) / vol);
  } else {
    const double mass = 1.0 / static_cast<double>(seeds.ids.size());
    for (VertexId v : seeds.ids) s.set(v, mass);
  }
  return s;
}

}  // namespace

PushResult approximate_pagerank(const Graph& g, const SeedSet& seeds,
                                const DiffusionParams& params) {
  params.validate();
  const double alpha = params.alpha;
  const double eps = params.eps;

  PushResult out;
  out.r = seed_vector(g, seeds, params.degree_weighted_seeds);

  std::deque<VertexId> queue;
  std::unordered_set<VertexId> queued;
  for (VertexId v : seeds.ids) {
    if (out.r.value(v) >= eps * g.degree(v)) {
      queue.push_back(v);
      queued.insert(v);
    }
  }

  const double work_budget = 1.0 / (eps * alpha);
  auto audit_mass = [&]() {
    const double total = out.p.l1_norm() + out.r.l1_norm();
    if (std::abs(total - 1.0) > 1e-12) {
      throw std::logic_error("push lost mass: |p|+|r| = " +
                             std::to_string(total));
    }
  };

  while (!queue.empty()) {
    const VertexId v = queue.front();
    queue.pop_front();
    queued.erase(v);

    const double rv = out.r.value(v);
    const double deg = g.degree(v);
    if (rv < eps * deg) continue;

    out.p.add(v, alpha * rv);
    const double spread = (1.0 - alpha) * rv / (2.0 * deg);
    g.for_edges_of(v, [&](VertexId u, double w) {
      const double ru = out.r.value(u) + spread * w;
      out.r.set(u, ru);
      if (ru >= eps * g.degree(u) && !queued.count(u)) {
        queue.push_back(u);
        queued.insert(u);
      }
    });
    const double keep = (1.0 - alpha) * rv / 2.0;
    out.r.set(v, keep);
    if (keep >= eps * deg && !queued.count(v)) {
      queue.push_back(v);
      queued.insert(v);
    }

    ++out.pushes;
    out.work += deg;
    if (out.work > work_budget * (1.0 + 1e-9)) {
      throw std::logic_error("push exceeded the 1/(eps*alpha) work bound");
    }
    // Sampled conservation audit; cheap relative to the pushes it covers.
    if (out.pushes < 64 || out.pushes % 256 == 0) audit_mass();
  }

  audit_mass();
  for (const auto& [v, rv] : out.r.entries()) {
    if (rv >= eps * g.degree(v)) {
      throw std::logic_error("push terminated with residual above threshold");
    }
  }
  return out;
}

Cluster pagerank_nibble(const Graph& g, VertexId seed,
                        std::uint64_t target_volume, double alpha) {
  if (target_volume < 1) throw DomainError("target_volume must be positive");
  if (static_cast<double>(target_volume) > g.total_volume() / 2.0) {
    throw DomainError("target_volume exceeds half the total volume");
  }
  const SeedSet s = SeedSet::from_ids(g, std::vector<VertexId>{seed});

  const int k_max = static_cast<int>(
      std::ceil(std::log2(static_cast<double>(target_volume))));
  const bool exact = g.integral_weights();

  bool have_best = false;
  Cluster best;
  for (int k = 0; k <= k_max; ++k) {
    DiffusionParams params;
    params.alpha = alpha;
    params.eps = std::ldexp(1.0, -k) / static_cast<double>(target_volume);
    const PushResult pr = approximate_pagerank(g, s, params);
    if (pr.p.empty()) continue;
    Cluster c = sweep_cut(g, pr.p);
    if (!have_best ||
        compare_ratio(c.cut(), std::min(c.volume(),
                                        g.total_volume() - c.volume()),
                      best.cut(),
                      std::min(best.volume(),
                               g.total_volume() - best.volume()),
                      exact) < 0) {
      best = std::move(c);
      have_best = true;
    }
  }
  if (!have_best) {
    throw DomainError("pagerank nibble produced no nonempty sweep");
  }
  return best;
}

namespace {

// Candidate coordinates for one proximal step: the support, the seeds, and
// every neighbor of the support. Nothing outside this set can move or have
// a violated optimality condition.
std::vector<VertexId> active_candidates(const Graph& g, const SeedSet& seeds,
                                        const SparseEmbedding& q) {
  std::unordered_set<VertexId> set(seeds.ids.begin(), seeds.ids.end());
  for (const auto& [v, x] : q.entries()) {
    set.insert(v);
    g.for_edges_of(v, [&](VertexId u, double) { set.insert(u); });
    (void)x;
  }
  std::vector<VertexId> out(set.begin(), set.end());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

double l1reg_gradient_at(const Graph& g, const SeedSet& seeds,
                         const DiffusionParams& params,
                         const SparseEmbedding& q, VertexId v) {
  const double alpha = params.alpha;
  const double dv = g.degree(v);
  double acc = 0.0;
  g.for_edges_of(v, [&](VertexId u, double w) {
    const double qu = q.value(u);
    if (qu != 0.0) acc += w * qu / std::sqrt(g.degree(u));
  });
  double grad = (1.0 + alpha) / 2.0 * q.value(v) -
                (1.0 - alpha) / 2.0 * acc / std::sqrt(dv);
  // Degree-normalized seed vector.
  if (std::binary_search(seeds.ids.begin(), seeds.ids.end(), v)) {
    double mass;
    if (params.degree_weighted_seeds) {
      double vol = 0.0;
      for (VertexId u : seeds.ids) vol += g.degree(u);
      mass = dv / vol;
    } else {
      mass = 1.0 / static_cast<double>(seeds.ids.size());
    }
    grad -= alpha * mass / std::sqrt(dv);
  }
  return grad;
}

double l1reg_objective(const Graph& g, const SeedSet& seeds,
                       const DiffusionParams& params,
                       const SparseEmbedding& q) {
  const double alpha = params.alpha;
  const SparseEmbedding s = seed_vector(g, seeds,
                                        params.degree_weighted_seeds);
  double quad = 0.0, lin = 0.0, pen = 0.0;
  for (const auto& [v, qv] : q.entries()) {
    double acc = 0.0;
    g.for_edges_of(v, [&](VertexId u, double w) {
      const double qu = q.value(u);
      if (qu != 0.0) acc += w * qu / std::sqrt(g.degree(u));
    });
    const double Qq = (1.0 + alpha) / 2.0 * qv -
                      (1.0 - alpha) / 2.0 * acc / std::sqrt(g.degree(v));
    quad += qv * Qq;
    pen += std::sqrt(g.degree(v)) * qv;
  }
  for (const auto& [v, sv] : s.entries()) {
    lin += sv / std::sqrt(g.degree(v)) * q.value(v);
  }
  return 0.5 * quad - alpha * lin + params.rho * alpha * pen;
}

SparseEmbedding l1reg_pagerank(const Graph& g, const SeedSet& seeds,
                               const DiffusionParams& params,
                               std::vector<double>* objective_trace) {
  params.validate();
  const double alpha = params.alpha;
  const double rho = params.rho;

  SparseEmbedding q;
  if (objective_trace) objective_trace->clear();

  double worst_residual = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < params.max_iters; ++iter) {
    const std::vector<VertexId> cand = active_candidates(g, seeds, q);

    // Gradient of the smooth part on the candidate set, all from the same
    // iterate (a Jacobi-style full prox step with unit step size, valid
    // because the spectrum of Q lies in [alpha, 1]).
    std::vector<double> grad(cand.size());
    double residual = 0.0;
    for (std::size_t i = 0; i < cand.size(); ++i) {
      const VertexId v = cand[i];
      grad[i] = l1reg_gradient_at(g, seeds, params, q, v);
      const double thresh = rho * alpha * std::sqrt(g.degree(v));
      if (q.value(v) > 0.0) {
        residual = std::max(residual, std::abs(grad[i] + thresh));
      } else {
        residual = std::max(residual, -(grad[i] + thresh));
      }
    }
    worst_residual = residual;
    if (objective_trace) {
      objective_trace->push_back(l1reg_objective(g, seeds, params, q));
    }
    if (residual <= params.kkt_tol) return q;

    for (std::size_t i = 0; i < cand.size(); ++i) {
      const VertexId v = cand[i];
      const double thresh = rho * alpha * std::sqrt(g.degree(v));
      q.set(v, std::max(0.0, q.value(v) - grad[i] - thresh));
    }
  }
  throw SolverError(
      "l1reg_pagerank: no convergence after " +
      std::to_string(params.max_iters) + " iterations; best iterate has " +
      std::to_string(q.support_size()) + " nonzeros, KKT residual " +
      std::to_string(worst_residual));
}

Cluster spectral_cluster(const Graph& g, const SeedSet& seeds,
                         const DiffusionParams& params,
                         SpectralMethod method) {
  SparseEmbedding x;
  switch (method) {
    case SpectralMethod::kAcl:
      x = approximate_pagerank(g, seeds, params).p;
      break;
    case SpectralMethod::kL1Reg:
      x = l1reg_pagerank(g, seeds, params);
      break;
  }
  if (x.empty()) throw DomainError("empty embedding: diffusion produced 0");
  return sweep_cut(g, x);
}

}  // namespace loclus
