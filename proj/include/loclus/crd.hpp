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

#ifndef LOCLUS_CRD_HPP_
#define LOCLUS_CRD_HPP_

#include <cstdint>

#include "loclus/graph.hpp"

namespace loclus {

struct CrdParams {
  std::int64_t capacity = 3;        // U: mass an edge may carry per round
  int height = 10;                  // h: vertex label limit
  int rounds = 4;                   // w: outer iterations
  std::int64_t mass_multiplier = 2; // initial seed mass, in units of degree

  void validate() const;  // throws DomainError
};

/// Capacity Releasing Diffusion.
///
/// Places mass_multiplier * deg(s) units of integer mass on each seed, then
/// alternates a unit-flow push-relabel settling phase (each vertex absorbs
/// up to deg(v) units; excess moves downhill along edges carrying at most
/// `capacity` units per round; labels stop at `height`) with a doubling of
/// all mass, for up to `rounds` rounds. The outer loop stops early once a
/// round ends with trapped excess, which is the signal that the diffusion
/// hit a bottleneck. The cluster is the sweep cut over settled mass.
///
/// Mass is conserved exactly within every settling phase (checked), only
/// touched vertices are allocated state, and the active-vertex schedule is
/// lowest-label-first with FIFO tie-break, so runs are deterministic.
Cluster crd_cluster(const Graph& g, const SeedSet& seeds,
                    const CrdParams& params);

}  // namespace loclus

#endif  // LOCLUS_CRD_HPP_
