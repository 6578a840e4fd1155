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

#ifndef LOCLUS_DIFFUSION_HPP_
#define LOCLUS_DIFFUSION_HPP_

#include <cstdint>
#include <vector>

#include "loclus/embedding.hpp"
#include "loclus/graph.hpp"

namespace loclus {

struct DiffusionParams {
  double alpha = 0.15;   // teleport probability, in (0,1)
  double eps = 1e-6;     // push tolerance, > 0
  double rho = 1e-4;     // l1 penalty scale, > 0
  int max_iters = 100000;
  double kkt_tol = 1e-6;
  // Seed mass: uniform 1/|seeds| per seed by default; degree-weighted
  // (deg(s)/vol(seeds)) when set.
  bool degree_weighted_seeds = false;

  void validate() const;  // throws DomainError
};

struct PushResult {
  SparseEmbedding p;  // approximate PageRank
  SparseEmbedding r;  // residual, r(v) < eps*deg(v) everywhere at return
  std::uint64_t pushes = 0;
  double work = 0.0;  // sum of degrees of pushed vertices
};

/// Approximate personalized PageRank by the lazy-walk push process.
///
/// Starts with residual mass 1 spread over the seeds and repeatedly pushes
/// any vertex with r(v) >= eps*deg(v): alpha*r(v) moves to p(v), half the
/// remainder stays at v, the other half spreads to neighbors in proportion
/// to edge weight. Scheduling is a FIFO queue with each vertex enqueued at
/// most once until popped, so runs are deterministic.
///
/// Guarantees checked on every run: ||p|| + ||r|| == 1 within 1e-12, and
/// total pushed degree <= 1/(eps*alpha). p(v) never exceeds the exact
/// personalized PageRank.
PushResult approximate_pagerank(const Graph& g, const SeedSet& seeds,
                                const DiffusionParams& params);

/// PageRank Nibble: sweeps approximate PageRank over the schedule
/// eps_k = 2^-k / target_volume (k = 0..ceil(log2(target_volume))) and
/// returns the best sweep cluster found. target_volume must be at most
/// half the total volume.
Cluster pagerank_nibble(const Graph& g, VertexId seed,
                        std::uint64_t target_volume, double alpha = 0.15);

/// l1-regularized PageRank via proximal gradient with unit step.
///
/// Minimizes  f(q) = 1/2 <q,Qq> - alpha <s~,q> + rho*alpha*sum_v sqrt(d_v) q_v
/// over q >= 0, where Q = (1+alpha)/2 I - (1-alpha)/2 D^-1/2 A D^-1/2 and
/// s~ is the degree-normalized seed vector. Returns once the per-coordinate
/// first-order optimality conditions hold within kkt_tol; throws
/// SolverError (reporting the residual) if max_iters is exhausted first.
/// Iterates touch only the active support plus its boundary.
///
/// objective_trace, when given, receives f at every iterate; the sequence
/// is non-increasing.
SparseEmbedding l1reg_pagerank(const Graph& g, const SeedSet& seeds,
                               const DiffusionParams& params,
                               std::vector<double>* objective_trace = nullptr);

/// Value of the l1-regularized objective at q; exposed for tests and
/// diagnostics.
double l1reg_objective(const Graph& g, const SeedSet& seeds,
                       const DiffusionParams& params,
                       const SparseEmbedding& q);

/// Smooth-part gradient (Qq - alpha*s~)(v); exposed for tests.
double l1reg_gradient_at(const Graph& g, const SeedSet& seeds,
                         const DiffusionParams& params,
                         const SparseEmbedding& q, VertexId v);

enum class SpectralMethod { kAcl, kL1Reg };

/// Diffusion followed by a sweep cut: for kAcl sweeps p, for kL1Reg
/// sweeps q. An all-zero diffusion propagates as a DomainError ("empty
/// embedding").
Cluster spectral_cluster(const Graph& g, const SeedSet& seeds,
                         const DiffusionParams& params, SpectralMethod method);

}  // namespace loclus

#endif  // LOCLUS_DIFFUSION_HPP_
