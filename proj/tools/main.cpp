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

#include <sys/resource.h>

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "loclus/crd.hpp"
#include "loclus/diffusion.hpp"
#include "loclus/flow.hpp"
#include "loclus/graph.hpp"
#include "loclus/pipelines.hpp"
#include "loclus/serialize.hpp"

namespace {

using loclus::Cluster;
using loclus::Graph;
using loclus::SeedSet;
using loclus::VertexId;

void emit(const std::string& out_path, const std::string& payload) {
  if (out_path.empty()) {
    std::cout << payload;
    if (!payload.empty() && payload.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw loclus::DataError("cannot open for writing: " + out_path);
  out << payload;
  if (!out) throw loclus::DataError("write failed: " + out_path);
}

Graph load_graph(const std::string& path, bool weighted) {
  loclus::LoadOptions opts;
  opts.weighted = weighted;
  return loclus::load_edge_list(path, opts);
}

std::vector<VertexId> parse_id_list(const std::string& csv) {
  std::vector<VertexId> ids;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    ids.push_back(static_cast<VertexId>(std::stoul(tok)));
  }
  return ids;
}

std::int64_t peak_rss_bytes() {
  struct rusage ru;
  if (getrusage(RUSAGE_SELF, &ru) == 0 && ru.ru_maxrss > 0) {
    return static_cast<std::int64_t>(ru.ru_maxrss) * 1024;
  }
  std::ifstream status("/proc/self/status");
  std::string line;
  while (std::getline(status, line)) {
    if (line.rfind("VmHWM:", 0) == 0) {
      long kb = 0;
      std::sscanf(line.c_str(), "VmHWM: %ld", &kb);
      return static_cast<std::int64_t>(kb) * 1024;
    }
  }
  return 0;
}

struct ClusterArgs {
  std::string graph, out, seed_csv, seed_file, method = "acl";
  std::string embedding_out;
  bool weighted = false;
  loclus::DiffusionParams params;
  std::uint64_t target_volume = 100;
  loclus::CrdParams crd;
};

int run_cluster(const ClusterArgs& a) {
  const Graph g = load_graph(a.graph, a.weighted);
  std::vector<VertexId> ids;
  if (!a.seed_file.empty()) {
    ids = loclus::read_vertex_list(a.seed_file);
  } else if (!a.seed_csv.empty()) {
    ids = parse_id_list(a.seed_csv);
  } else {
    throw loclus::DomainError("cluster needs --seed or --seed-file");
  }
  const SeedSet seeds = SeedSet::from_ids(g, ids);

  Cluster c;
  loclus::SparseEmbedding embedding;
  if (a.method == "acl") {
    const loclus::PushResult pr =
        loclus::approximate_pagerank(g, seeds, a.params);
    embedding = pr.p;
    if (embedding.empty()) {
      throw loclus::DomainError("empty embedding: eps too large for seeds");
    }
    c = loclus::sweep_cut(g, embedding);
  } else if (a.method == "l1reg") {
    embedding = loclus::l1reg_pagerank(g, seeds, a.params);
    if (embedding.empty()) {
      throw loclus::DomainError("empty embedding: rho too large for seeds");
    }
    c = loclus::sweep_cut(g, embedding);
  } else if (a.method == "nibble") {
    if (ids.size() != 1) {
      throw loclus::DomainError("nibble takes exactly one seed");
    }
    c = loclus::pagerank_nibble(g, ids[0], a.target_volume, a.params.alpha);
  } else if (a.method == "crd") {
    c = loclus::crd_cluster(g, seeds, a.crd);
  } else {
    throw loclus::DomainError("unknown method: " + a.method);
  }

  if (!a.embedding_out.empty()) {
    if (embedding.empty()) {
      throw loclus::DomainError("--embedding-out needs an acl or l1reg run");
    }
    const bool csv =
        a.embedding_out.size() > 4 &&
        a.embedding_out.rfind(".csv") == a.embedding_out.size() - 4;
    emit(a.embedding_out, csv ? loclus::embedding_to_csv(embedding)
                              : loclus::embedding_to_json(embedding));
  }
  emit(a.out, loclus::cluster_to_json(c));
  return 0;
}

struct ImproveArgs {
  std::string graph, out, cluster_file, method = "mqi";
  bool weighted = false;
  double delta = 1.0;
};

int run_improve(const ImproveArgs& a) {
  const Graph g = load_graph(a.graph, a.weighted);
  const std::vector<VertexId> ids = loclus::read_vertex_list(a.cluster_file);
  const Cluster input = Cluster::from_set(g, ids);
  loclus::ImproveResult r;
  if (a.method == "mqi") {
    r = loclus::mqi(g, input);
  } else if (a.method == "flowimprove") {
    r = loclus::flow_improve(g, input);
  } else if (a.method == "simplelocal") {
    r = loclus::simple_local(g, input, a.delta);
  } else {
    throw loclus::DomainError("unknown improve method: " + a.method);
  }
  emit(a.out, loclus::improve_to_json(r));
  return 0;
}

struct NcpArgs {
  std::string graph, out;
  bool weighted = false;
  loclus::NcpOptions options;
};

int run_ncp(const NcpArgs& a) {
  const Graph g = load_graph(a.graph, a.weighted);
  const std::vector<loclus::NcpRecord> records =
      loclus::compute_ncp(g, a.options);
  emit(a.out, loclus::ncp_to_csv(records));
  return 0;
}

struct PredictArgs {
  std::string graph, out, method = "acl";
  bool weighted = false;
  std::vector<std::string> class_specs;
  loclus::DiffusionParams params;
};

int run_predict(const PredictArgs& a) {
  if (a.method != "acl" && a.method != "l1reg") {
    throw loclus::DomainError("predict method must be acl or l1reg");
  }
  const Graph g = load_graph(a.graph, a.weighted);
  std::map<std::int32_t, SeedSet> classes;
  for (const std::string& spec : a.class_specs) {
    const std::size_t colon = spec.find(':');
    if (colon == std::string::npos) {
      throw loclus::DomainError("class spec must look like id:v1,v2,...");
    }
    const std::int32_t cid = std::stoi(spec.substr(0, colon));
    if (classes.count(cid)) {
      throw loclus::DomainError("class " + std::to_string(cid) +
                                " given twice");
    }
    classes.emplace(
        cid, SeedSet::from_ids(g, parse_id_list(spec.substr(colon + 1))));
  }
  const loclus::SpectralMethod method = a.method == "l1reg"
                                            ? loclus::SpectralMethod::kL1Reg
                                            : loclus::SpectralMethod::kAcl;
  const loclus::LabelAssignment labels =
      loclus::predict_labels(g, classes, a.params, method);
  emit(a.out, loclus::labels_to_csv(labels));
  return 0;
}

struct EvalArgs {
  std::string graph, out, found, target;
  bool weighted = false;
};

int run_eval(const EvalArgs& a) {
  const Graph g = load_graph(a.graph, a.weighted);
  const Cluster found =
      Cluster::from_set(g, loclus::read_vertex_list(a.found));
  const Cluster target =
      Cluster::from_set(g, loclus::read_vertex_list(a.target));
  emit(a.out,
       loclus::recovery_to_json(loclus::evaluate_recovery(g, found, target)));
  return 0;
}

struct GenArgs {
  std::string kind = "ring_of_cliques", out;
  loclus::SyntheticSpec spec;
  std::uint64_t rng_seed = 1;
};

int run_gen(const GenArgs& a) {
  loclus::SyntheticSpec spec = a.spec;
  if (a.kind == "ring_of_cliques") {
    spec.kind = loclus::SyntheticKind::kRingOfCliques;
  } else if (a.kind == "planted_partition") {
    spec.kind = loclus::SyntheticKind::kPlantedPartition;
  } else if (a.kind == "random_geometric") {
    spec.kind = loclus::SyntheticKind::kRandomGeometric;
  } else {
    throw loclus::DomainError("unknown synthetic kind: " + a.kind);
  }
  const Graph g = loclus::generate_synthetic(spec, a.rng_seed);
  if (a.out.empty()) {
    loclus::write_edge_list(g, std::cout);
  } else {
    loclus::write_edge_list(g, a.out);
  }
  return 0;
}

struct StatsArgs {
  std::string graph, out;
  bool weighted = false;
};

int run_stats(const StatsArgs& a) {
  const Graph g = load_graph(a.graph, a.weighted);
  double dmin = 0.0, dmax = 0.0, dsum = 0.0;
  std::size_t isolated = 0;
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    const double d = g.degree(static_cast<VertexId>(v));
    if (v == 0 || d < dmin) dmin = d;
    if (v == 0 || d > dmax) dmax = d;
    dsum += d;
    if (!(d > 0.0)) ++isolated;
  }
  nlohmann::ordered_json j;
  j["n"] = g.vertex_count();
  j["m"] = g.edge_count();
  j["total_volume"] = g.total_volume();
  j["degree_min"] = dmin;
  j["degree_max"] = dmax;
  j["degree_mean"] =
      g.vertex_count() ? dsum / static_cast<double>(g.vertex_count()) : 0.0;
  j["isolated"] = isolated;
  j["unit_weights"] = g.unit_weights();
  j["peak_rss_bytes"] = peak_rss_bytes();
  emit(a.out, j.dump());
  return 0;
}

void add_diffusion_flags(CLI::App* cmd, loclus::DiffusionParams* p) {
  cmd->add_option("--alpha", p->alpha, "Teleport probability in (0,1)")
      ->capture_default_str();
  cmd->add_option("--eps", p->eps, "Push tolerance (acl)")
      ->capture_default_str();
  cmd->add_option("--rho", p->rho, "l1 penalty scale (l1reg)")
      ->capture_default_str();
  cmd->add_option("--kkt-tol", p->kkt_tol, "l1reg optimality tolerance")
      ->capture_default_str();
  cmd->add_option("--max-iters", p->max_iters, "l1reg iteration cap")
      ->capture_default_str();
  cmd->add_flag("--degree-weighted-seeds", p->degree_weighted_seeds,
                "Weight seed mass by degree instead of uniformly");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"loclus: local graph clustering from seed vertices"};
  app.require_subcommand(1);

  ClusterArgs cluster_args;
  CLI::App* cluster = app.add_subcommand(
      "cluster", "Find a low-conductance cluster around seed vertices");
  cluster->add_option("--graph", cluster_args.graph, "Edge list path")
      ->required();
  cluster->add_flag("--weighted", cluster_args.weighted,
                    "Read the third column as edge weight");
  cluster->add_option("--method", cluster_args.method,
                      "acl | l1reg | nibble | crd")
      ->capture_default_str();
  CLI::Option_group* seed_group = cluster->add_option_group(
      "seeds", "Where the seed vertices come from");
  seed_group->add_option("--seed", cluster_args.seed_csv,
                         "Seed vertex ids, comma-separated");
  seed_group->add_option("--seed-file", cluster_args.seed_file,
                         "File with one seed id per line");
  seed_group->require_option(1);
  add_diffusion_flags(cluster, &cluster_args.params);
  cluster->add_option("--target-volume", cluster_args.target_volume,
                      "Target cluster volume (nibble)")
      ->capture_default_str();
  cluster->add_option("--crd-u", cluster_args.crd.capacity,
                      "CRD per-edge capacity per round")
      ->capture_default_str();
  cluster->add_option("--crd-h", cluster_args.crd.height, "CRD label limit")
      ->capture_default_str();
  cluster->add_option("--crd-w", cluster_args.crd.rounds, "CRD outer rounds")
      ->capture_default_str();
  cluster->add_option("--crd-multiplier", cluster_args.crd.mass_multiplier,
                      "CRD seed mass in units of degree")
      ->capture_default_str();
  cluster->add_option("--embedding-out", cluster_args.embedding_out,
                      "Also write the diffusion embedding (.json or .csv)");
  cluster->add_option("--out", cluster_args.out,
                      "Output path (default stdout)");

  ImproveArgs improve_args;
  CLI::App* improve = app.add_subcommand(
      "improve", "Improve a given cluster with a flow method");
  improve->add_option("--graph", improve_args.graph, "Edge list path")
      ->required();
  improve->add_flag("--weighted", improve_args.weighted,
                    "Read the third column as edge weight");
  improve->add_option("--cluster", improve_args.cluster_file,
                      "Cluster file: one id per line, or cluster JSON")
      ->required();
  improve->add_option("--method", improve_args.method,
                      "mqi | flowimprove | simplelocal")
      ->capture_default_str();
  improve->add_option("--delta", improve_args.delta,
                      "Locality strength (simplelocal)")
      ->capture_default_str();
  improve->add_option("--out", improve_args.out,
                      "Output path (default stdout)");

  NcpArgs ncp_args;
  CLI::App* ncp =
      app.add_subcommand("ncp", "Approximate network community profile");
  ncp->add_option("--graph", ncp_args.graph, "Edge list path")->required();
  ncp->add_flag("--weighted", ncp_args.weighted,
                "Read the third column as edge weight");
  ncp->add_option("--method", ncp_args.options.method, "acl | l1reg")
      ->capture_default_str();
  ncp->add_option("--alphas", ncp_args.options.alphas, "Grid of alpha values")
      ->delimiter(',')
      ->capture_default_str();
  ncp->add_option("--epses", ncp_args.options.epses,
                  "Grid of eps values (acl)")
      ->delimiter(',')
      ->capture_default_str();
  ncp->add_option("--rhos", ncp_args.options.rhos,
                  "Grid of rho values (l1reg)")
      ->delimiter(',')
      ->capture_default_str();
  ncp->add_option("--bins", ncp_args.options.bins,
                  "Number of log-spaced size bins")
      ->capture_default_str();
  ncp->add_option("--seeds-per-bin", ncp_args.options.seeds_per_bin,
                  "Sampled seeds per bin")
      ->capture_default_str();
  ncp->add_option("--rng", ncp_args.options.rng_seed, "RNG seed")
      ->capture_default_str();
  ncp->add_option("--threads", ncp_args.options.threads,
                  "Worker threads (output is thread-count independent)")
      ->capture_default_str();
  ncp->add_flag("--all", ncp_args.options.all_records,
                "Emit every in-bin record, not only per-bin minima");
  ncp->add_flag("--degree-biased-seeds", ncp_args.options.degree_biased_seeds,
                "Sample seeds proportionally to degree");
  ncp->add_option("--out", ncp_args.out, "Output path (default stdout)");

  PredictArgs predict_args;
  CLI::App* predict =
      app.add_subcommand("predict", "Seeded multi-class label prediction");
  predict->add_option("--graph", predict_args.graph, "Edge list path")
      ->required();
  predict->add_flag("--weighted", predict_args.weighted,
                    "Read the third column as edge weight");
  predict->add_option("--class", predict_args.class_specs,
                      "Class seeds as id:v1,v2,... (repeatable)")
      ->required();
  predict->add_option("--method", predict_args.method, "acl | l1reg")
      ->capture_default_str();
  add_diffusion_flags(predict, &predict_args.params);
  predict->add_option("--out", predict_args.out,
                      "Output path (default stdout)");

  EvalArgs eval_args;
  CLI::App* eval = app.add_subcommand(
      "eval", "Volume-normalized precision/recall of found vs target");
  eval->add_option("--graph", eval_args.graph, "Edge list path")->required();
  eval->add_flag("--weighted", eval_args.weighted,
                 "Read the third column as edge weight");
  eval->add_option("--found", eval_args.found, "Found cluster file")
      ->required();
  eval->add_option("--target", eval_args.target, "Target cluster file")
      ->required();
  eval->add_option("--out", eval_args.out, "Output path (default stdout)");

  GenArgs gen_args;
  CLI::App* gen = app.add_subcommand("gen", "Generate a synthetic graph");
  gen->add_option("--kind", gen_args.kind,
                  "ring_of_cliques | planted_partition | random_geometric")
      ->capture_default_str();
  gen->add_option("--k", gen_args.spec.k, "Cliques in the ring")
      ->capture_default_str();
  gen->add_option("--c", gen_args.spec.c, "Clique size")
      ->capture_default_str();
  gen->add_option("--blocks", gen_args.spec.blocks, "Planted blocks")
      ->capture_default_str();
  gen->add_option("--block-size", gen_args.spec.block_size,
                  "Vertices per block")
      ->capture_default_str();
  gen->add_option("--p-in", gen_args.spec.p_in,
                  "Within-block edge probability")
      ->capture_default_str();
  gen->add_option("--p-out", gen_args.spec.p_out,
                  "Cross-block edge probability")
      ->capture_default_str();
  gen->add_option("--n", gen_args.spec.n, "Vertices (random_geometric)")
      ->capture_default_str();
  gen->add_option("--radius", gen_args.spec.radius,
                  "Connection radius (random_geometric)")
      ->capture_default_str();
  gen->add_option("--rng", gen_args.rng_seed, "RNG seed")
      ->capture_default_str();
  gen->add_option("--out", gen_args.out, "Output path (default stdout)");

  StatsArgs stats_args;
  CLI::App* stats = app.add_subcommand("stats", "Graph summary as JSON");
  stats->add_option("--graph", stats_args.graph, "Edge list path")
      ->required();
  stats->add_flag("--weighted", stats_args.weighted,
                  "Read the third column as edge weight");
  stats->add_option("--out", stats_args.out, "Output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (cluster->parsed()) return run_cluster(cluster_args);
    if (improve->parsed()) return run_improve(improve_args);
    if (ncp->parsed()) return run_ncp(ncp_args);
    if (predict->parsed()) return run_predict(predict_args);
    if (eval->parsed()) return run_eval(eval_args);
    if (gen->parsed()) return run_gen(gen_args);
    if (stats->parsed()) return run_stats(stats_args);
  } catch (const loclus::Error& e) {
    const bool color = std::getenv("NO_COLOR") == nullptr;
    std::fprintf(stderr, "%serror:%s %s\n", color ? "\x1b[31m" : "",
                 color ? "\x1b[0m" : "", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 2;
  }
  return 1;
}
