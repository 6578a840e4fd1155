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

#ifndef LOCLUS_SERIALIZE_HPP_
#define LOCLUS_SERIALIZE_HPP_

#include <string>
#include <vector>

#include "loclus/embedding.hpp"
#include "loclus/flow.hpp"
#include "loclus/graph.hpp"
#include "loclus/pipelines.hpp"

namespace loclus {

// All emitters produce byte-deterministic output: doubles use shortest
// round-trip formatting and rows follow a fixed order.

std::string cluster_to_json(const Cluster& c);
std::string cluster_to_text(const Cluster& c);  // one vertex id per line

std::string improve_to_json(const ImproveResult& r);

std::string embedding_to_json(const SparseEmbedding& x);
std::string embedding_to_csv(const SparseEmbedding& x);  // vertex,value

// bin_lo,bin_hi,method,seed,alpha,eps,rho,size,volume,cut,conductance
std::string ncp_to_csv(const std::vector<NcpRecord>& records);

std::string labels_to_csv(const LabelAssignment& a);  // vertex,label,score

std::string recovery_to_json(const RecoveryScore& s);

/// Reads a vertex set: either the one-id-per-line text format or a JSON
/// object with a "members" array (as written by cluster_to_json).
std::vector<VertexId> read_vertex_list(const std::string& path);

}  // namespace loclus

#endif  // LOCLUS_SERIALIZE_HPP_
