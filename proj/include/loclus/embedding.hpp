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

#ifndef LOCLUS_EMBEDDING_HPP_
#define LOCLUS_EMBEDDING_HPP_

#include <algorithm>
#include <cstdint>
#include <unordered_map>
#include <utility>
#include <vector>

namespace loclus {

using VertexId = std::uint32_t;

/// Sparse nonnegative vertex vector. Diffusions hand these around as the
/// PageRank estimate p, the residual r, or the l1-regularized solution q.
/// Zeros are never stored: value(v) == 0 exactly when v is not in the
/// support.
class SparseEmbedding {
 public:
  double value(VertexId v) const {
    auto it = entries_.find(v);
    return it == entries_.end() ? 0.0 : it->second;
  }

  /// Sets x(v). Non-positive values erase the entry.
  void set(VertexId v, double x) {
    if (x > 0.0) {
      entries_[v] = x;
    } else {
      entries_.erase(v);
    }
  }

  void add(VertexId v, double x) { set(v, value(v) + x); }

  bool contains(VertexId v) const { return entries_.count(v) != 0; }
  bool empty() const { return entries_.empty(); }
  std::size_t support_size() const { return entries_.size(); }

  double l1_norm() const {
    double s = 0.0;
    for (const auto& [v, x] : entries_) s += x;
    return s;
  }

  /// Entries sorted by vertex id; the canonical order for serialization
  /// and for any iteration whose result must be deterministic.
  std::vector<std::pair<VertexId, double>> sorted_entries() const {
    std::vector<std::pair<VertexId, double>> out(entries_.begin(),
                                                 entries_.end());
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
  }

  const std::unordered_map<VertexId, double>& entries() const {
    return entries_;
  }

 private:
  std::unordered_map<VertexId, double> entries_;
};

}  // namespace loclus

#endif  // LOCLUS_EMBEDDING_HPP_
