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

#include "loclus/serialize.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace loclus {

namespace {

std::string fmt(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

}  // namespace

std::string cluster_to_json(const Cluster& c) {
  nlohmann::ordered_json j;
  j["members"] = c.members();
  j["cut"] = c.cut();
  j["volume"] = c.volume();
  j["conductance"] = c.conductance();
  return j.dump();
}

std::string cluster_to_text(const Cluster& c) {
  std::ostringstream out;
  for (VertexId v : c.members()) out << v << '\n';
  return out.str();
}

std::string improve_to_json(const ImproveResult& r) {
  nlohmann::ordered_json j;
  j["members"] = r.cluster.members();
  j["cut"] = r.cluster.cut();
  j["volume"] = r.cluster.volume();
  j["conductance"] = r.cluster.conductance();
  j["iterations"] = r.iterations;
  j["trace"] = r.conductance_trace;
  j["complemented"] = r.complemented;
  return j.dump();
}

std::string embedding_to_json(const SparseEmbedding& x) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [v, val] : x.sorted_entries()) {
    j[std::to_string(v)] = val;
  }
  return j.dump();
}

std::string embedding_to_csv(const SparseEmbedding& x) {
  std::ostringstream out;
  out << "vertex,value\n";
  for (const auto& [v, val] : x.sorted_entries()) {
    out << v << ',' << fmt(val) << '\n';
  }
  return out.str();
}

std::string ncp_to_csv(const std::vector<NcpRecord>& records) {
  std::ostringstream out;
  out << "bin_lo,bin_hi,method,seed,alpha,eps,rho,size,volume,cut,"
         "conductance\n";
  for (const NcpRecord& r : records) {
    out << r.bin_lo << ',' << r.bin_hi << ',' << r.method << ',';
    if (!r.found) {
      out << ",,,,,,,\n";
      continue;
    }
    out << r.seed << ',' << fmt(r.alpha) << ',';
    if (r.eps > 0.0) out << fmt(r.eps);
    out << ',';
    if (r.rho > 0.0) out << fmt(r.rho);
    out << ',' << r.cluster_size << ',' << fmt(r.cluster_volume) << ','
        << fmt(r.cut) << ',' << fmt(r.conductance) << '\n';
  }
  return out.str();
}

std::string labels_to_csv(const LabelAssignment& a) {
  std::ostringstream out;
  out << "vertex,label,score\n";
  for (std::size_t v = 0; v < a.labels.size(); ++v) {
    out << v << ',';
    if (a.labels[v] == LabelAssignment::kUnlabeled) {
      out << "unlabeled";
    } else {
      out << a.labels[v];
    }
    out << ',' << fmt(a.scores[v]) << '\n';
  }
  return out.str();
}

std::string recovery_to_json(const RecoveryScore& s) {
  nlohmann::ordered_json j;
  j["precision"] = s.precision;
  j["recall"] = s.recall;
  j["precision_cardinality"] = s.precision_cardinality;
  j["recall_cardinality"] = s.recall_cardinality;
  return j.dump();
}

std::vector<VertexId> read_vertex_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open vertex list: " + path);
  // Peek: JSON cluster files start with '{'.
  char first = 0;
  in >> std::ws;
  in.get(first);
  in.unget();
  std::vector<VertexId> out;
  if (first == '{') {
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw DataError("bad cluster JSON in " + path + ": " + e.what());
    }
    if (!j.contains("members") || !j["members"].is_array()) {
      throw DataError("cluster JSON lacks a members array: " + path);
    }
    for (const auto& v : j["members"]) {
      out.push_back(v.get<VertexId>());
    }
    return out;
  }
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos || line[pos] == '#') continue;
    try {
      const unsigned long id = std::stoul(line.substr(pos));
      out.push_back(static_cast<VertexId>(id));
    } catch (const std::exception&) {
      throw DataError("bad vertex id in " + path + " line " +
                      std::to_string(lineno));
    }
  }
  if (out.empty()) throw DataError("vertex list is empty: " + path);
  return out;
}

}  // namespace loclus
