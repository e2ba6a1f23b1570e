/*
 * Copyright 2026 The qaoa-warmstart Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qaoa_ws/errors.hpp"
#include "qaoa_ws/rng.hpp"

namespace qaoa_ws {

inline constexpr int kDefaultMaxQubits = 16;

using Edge = std::pair<int, int>;

/// Undirected simple graph on nodes {0..n-1}. Edges are kept as (u, v) with
/// u < v, sorted and duplicate-free.
struct Graph {
  std::string id;
  int n = 0;
  std::vector<Edge> edges;

  std::size_t num_edges() const { return edges.size(); }
};

/// Sorts, orients (u < v) and validates the edge list in place.
inline void canonicalize(Graph& g) {
  if (g.n < 1) throw DomainError("graph '" + g.id + "': node count must be >= 1");
  for (auto& [u, v] : g.edges) {
    if (u > v) std::swap(u, v);
    if (u < 0 || v >= g.n) throw DomainError("graph '" + g.id + "': edge endpoint out of range");
    if (u == v) throw DomainError("graph '" + g.id + "': self-loop");
  }
  std::sort(g.edges.begin(), g.edges.end());
  if (std::adjacent_find(g.edges.begin(), g.edges.end()) != g.edges.end())
    throw DomainError("graph '" + g.id + "': duplicate edge");
}

inline Graph make_graph(std::string id, int n, std::vector<Edge> edges) {
  Graph g{std::move(id), n, std::move(edges)};
  canonicalize(g);
  return g;
}

/// G(n, p): candidate edges are visited in lexicographic (u, v) order and each
/// consumes exactly one uniform draw.
inline Graph erdos_renyi(int n, double edge_prob, std::uint64_t seed, std::string id = {}) {
  if (n < 1) throw DomainError("erdos_renyi: n must be >= 1");
  if (!(edge_prob >= 0.0 && edge_prob <= 1.0))
    throw DomainError("erdos_renyi: edge probability must lie in [0, 1]");
  Rng rng(seed);
  Graph g;
  g.id = id.empty() ? "er-" + std::to_string(n) + "-" + std::to_string(seed) : std::move(id);
  g.n = n;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (uniform01(rng) < edge_prob) g.edges.emplace_back(u, v);
  return g;
}

inline int cut_value(const Graph& g, std::uint64_t assignment) {
  int cut = 0;
  for (const auto& [u, v] : g.edges) cut += static_cast<int>(((assignment >> u) ^ (assignment >> v)) & 1U);
  return cut;
}

/// Character i of `bits` is the side ('0' or '1') of node i.
inline std::uint64_t parse_assignment(std::string_view bits, int n) {
  if (static_cast<int>(bits.size()) != n)
    throw DomainError("assignment length " + std::to_string(bits.size()) + " does not match node count " +
                      std::to_string(n));
  std::uint64_t z = 0;
  for (int i = 0; i < n; ++i) {
    if (bits[i] == '1') z |= std::uint64_t{1} << i;
    else if (bits[i] != '0') throw DomainError("assignment must contain only '0'/'1'");
  }
  return z;
}

inline std::string format_assignment(std::uint64_t z, int n) {
  std::string s(static_cast<std::size_t>(n), '0');
  for (int i = 0; i < n; ++i)
    if ((z >> i) & 1U) s[i] = '1';
  return s;
}

inline int cut_value(const Graph& g, std::string_view bits) { return cut_value(g, parse_assignment(bits, g.n)); }

/// Cut count of every basis assignment: the diagonal of the MaxCut cost Hamiltonian.
struct CutTable {
  int n = 0;
  int num_edges = 0;
  std::vector<int> values;
  int max_cut = 0;

  std::size_t size() const { return values.size(); }
};

inline void check_qubits(int n, int max_qubits = kDefaultMaxQubits) {
  if (n < 1) throw DomainError("node count must be >= 1");
  if (n > max_qubits)
    throw ResourceError(std::to_string(n) + " nodes exceeds the limit of " + std::to_string(max_qubits) + " qubits");
}

inline CutTable cut_table(const Graph& g, int max_qubits = kDefaultMaxQubits) {
  check_qubits(g.n, max_qubits);
  CutTable t;
  t.n = g.n;
  t.num_edges = static_cast<int>(g.edges.size());
  const std::size_t dim = std::size_t{1} << g.n;
  t.values.assign(dim, 0);
  // Each edge adds 1 to every assignment that separates its endpoints.
  for (const auto& [u, v] : g.edges)
    for (std::size_t z = 0; z < dim; ++z) t.values[z] += static_cast<int>(((z >> u) ^ (z >> v)) & 1U);
  t.max_cut = *std::max_element(t.values.begin(), t.values.end());
  return t;
}

struct MaxCutResult {
  int value = 0;
  std::uint64_t witness = 0;  // lowest assignment index attaining value
};

inline MaxCutResult max_cut(const CutTable& t) {
  const auto it = std::max_element(t.values.begin(), t.values.end());
  return {*it, static_cast<std::uint64_t>(it - t.values.begin())};
}

inline MaxCutResult max_cut(const Graph& g, int max_qubits = kDefaultMaxQubits) {
  return max_cut(cut_table(g, max_qubits));
}

// ---- JSON Lines persistence -------------------------------------------------

inline nlohmann::json to_json(const Graph& g) {
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& [u, v] : g.edges) edges.push_back({u, v});
  return {{"id", g.id}, {"n", g.n}, {"edges", std::move(edges)}};
}

inline Graph graph_from_json(const nlohmann::json& j) {
  try {
    Graph g;
    g.id = j.at("id").get<std::string>();
    g.n = j.at("n").get<int>();
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2) throw FormatError("edge must be a [u, v] pair");
      g.edges.emplace_back(e[0].get<int>(), e[1].get<int>());
    }
    canonicalize(g);
    return g;
  } catch (const nlohmann::json::exception& ex) {
    throw FormatError(std::string("invalid graph record: ") + ex.what());
  }
}

inline void write_graphs(std::ostream& os, const std::vector<Graph>& graphs) {
  for (Graph g : graphs) {
    canonicalize(g);
    os << to_json(g).dump() << '\n';
  }
}

inline std::vector<Graph> read_graphs(std::istream& is) {
  std::vector<Graph> graphs;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& ex) {
      throw FormatError("graphs line " + std::to_string(lineno) + ": " + ex.what());
    }
    graphs.push_back(graph_from_json(j));
  }
  return graphs;
}

inline std::vector<Graph> read_graphs_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open graph file '" + path + "'");
  return read_graphs(in);
}

/// `count` G(n, p) graphs with ids "g0000", "g0001", ... Edgeless draws are
/// skipped by advancing to the next seed.
inline std::vector<Graph> generate_graphs(int n, int count, double edge_prob, std::uint64_t seed) {
  std::vector<Graph> out;
  out.reserve(static_cast<std::size_t>(count));
  std::uint64_t attempt = 0;
  char id[32];
  while (static_cast<int>(out.size()) < count) {
    Graph g = erdos_renyi(n, edge_prob, derive_seed(seed, attempt++));
    if (g.edges.empty()) {
      if (edge_prob == 0.0 || n < 2) throw DomainError("generate_graphs: edge probability admits no edges");
      continue;
    }
    std::snprintf(id, sizeof id, "g%04zu", out.size());
    g.id = id;
    out.push_back(std::move(g));
  }
  return out;
}

}  // namespace qaoa_ws
