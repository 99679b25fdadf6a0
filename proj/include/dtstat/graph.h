// Copyright 2026 The dtstat Authors.
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

// Host graph containers on the vertex set {0, ..., n-1}.

#ifndef DTSTAT_GRAPH_H_
#define DTSTAT_GRAPH_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <random>
#include <unordered_map>
#include <utility>
#include <vector>

#include "json.hpp"

namespace dtstat {

using Vertex = int32_t;

struct Edge {
  Vertex u = 0;  // u < v
  Vertex v = 0;
  double w = 1.0;
};

inline uint64_t EdgeKey(Vertex a, Vertex b) {
  if (a > b) std::swap(a, b);
  return (static_cast<uint64_t>(static_cast<uint32_t>(a)) << 32) |
         static_cast<uint32_t>(b);
}

// Simple undirected graph with optional real edge weights (default 1).
class SimpleGraph {
 public:
  struct Neighbor {
    Vertex to;
    double w;
  };

  explicit SimpleGraph(int n = 0);

  int n() const { return static_cast<int>(adjacency_.size()); }
  int64_t num_edges() const { return static_cast<int64_t>(weights_.size()); }

  // Returns false when the edge already exists (weight left unchanged).
  bool AddEdge(Vertex u, Vertex v, double w = 1.0);
  bool HasEdge(Vertex u, Vertex v) const;
  // Weight of an edge, or 0 when absent.
  double Weight(Vertex u, Vertex v) const;

  const std::vector<Neighbor>& neighbors(Vertex v) const {
    return adjacency_[v];
  }
  int degree(Vertex v) const { return static_cast<int>(adjacency_[v].size()); }

  // Edges in (u, v) lexicographic order with u < v.
  std::vector<Edge> Edges() const;

  // True when any edge carries a weight other than 1.
  bool weighted() const { return weighted_; }

 private:
  std::vector<std::vector<Neighbor>> adjacency_;
  std::unordered_map<uint64_t, double> weights_;
  bool weighted_ = false;
};

// Real weights on every pair of the complete graph K_n: the explicit weight
// for pairs in `support`, `background` for every other pair, 0 on the
// diagonal. A sparse weighted graph is the special case background == 0.
class WeightedGraph {
 public:
  WeightedGraph() = default;
  WeightedGraph(SimpleGraph support, double background);

  int n() const { return support_.n(); }
  double background() const { return background_; }
  bool dense() const { return background_ != 0.0; }
  const SimpleGraph& support() const { return support_; }

  double Weight(Vertex u, Vertex v) const {
    if (u == v) return 0.0;
    if (support_.HasEdge(u, v)) return support_.Weight(u, v);
    return background_;
  }

  // Calls fn(w, weight) for every vertex w that can follow u on a walk with a
  // possibly non-zero weight: support neighbours of u, or all w != u when the
  // background is non-zero.
  template <typename Fn>
  void ForEachNeighbor(Vertex u, Fn&& fn) const {
    if (!dense()) {
      for (const auto& nb : support_.neighbors(u)) fn(nb.to, nb.w);
      return;
    }
    for (Vertex w = 0; w < n(); ++w) {
      if (w != u) fn(w, Weight(u, w));
    }
  }

 private:
  SimpleGraph support_;
  double background_ = 0.0;
};

// Multigraph on a subset of [n]; multiplicities are capped at 2^16.
class Multigraph {
 public:
  static constexpr uint32_t kMaxMultiplicity = 1u << 16;

  explicit Multigraph(int n = 0) : n_(n) {}

  int n() const { return n_; }
  void AddVertex(Vertex v);
  void AddEdge(Vertex u, Vertex v, uint32_t count = 1);

  uint32_t Multiplicity(Vertex u, Vertex v) const;
  const std::map<uint64_t, uint32_t>& multiplicities() const {
    return multiplicities_;
  }
  // Declared vertices together with every edge endpoint, sorted.
  std::vector<Vertex> Vertices() const;
  int64_t TotalMultiplicity() const;

  // Drops multiplicities; vertices are kept on [n].
  SimpleGraph Simplify() const;

  // Degree counting multiplicity.
  int64_t Degree(Vertex v) const;
  // Number of distinct neighbours.
  int SimpleDegree(Vertex v) const;

 private:
  int n_;
  std::map<uint64_t, uint32_t> multiplicities_;
  std::vector<Vertex> declared_;
};

// Excess |E| - |V|. A SimpleGraph counts all n declared vertices; a
// Multigraph counts its vertex set and edges with multiplicity.
int64_t Tau(const SimpleGraph& g);
int64_t Tau(const Multigraph& g);

struct VertexColoring {
  int num_colors = 0;
  std::vector<uint8_t> colors;

  int n() const { return static_cast<int>(colors.size()); }

  static VertexColoring Uniform(int n, int num_colors, std::mt19937_64& rng);
};

// True iff the colours on `vertices` are pairwise distinct.
bool Colorful(const VertexColoring& mu, const std::vector<Vertex>& vertices);

// Sorted membership set over [n].
class VertexSet {
 public:
  VertexSet() = default;
  VertexSet(int n, const std::vector<Vertex>& members);

  int n() const { return static_cast<int>(mask_.size()); }
  bool Contains(Vertex v) const { return mask_[v] != 0; }
  const std::vector<Vertex>& members() const { return members_; }
  int size() const { return static_cast<int>(members_.size()); }
  // Sorted vertices of [n] not in the set.
  std::vector<Vertex> Complement() const;

 private:
  std::vector<uint8_t> mask_;
  std::vector<Vertex> members_;
};

// Edge-list text format: "n <count>" then one "u v [w]" line per edge.
void WriteEdgeList(std::ostream& out, const SimpleGraph& g);
SimpleGraph ReadEdgeList(std::istream& in);

// JSON mirror {n, edges: [[u, v] or [u, v, w]]}.
nlohmann::json GraphToJson(const SimpleGraph& g);
SimpleGraph GraphFromJson(const nlohmann::json& j);

}  // namespace dtstat

#endif  // DTSTAT_GRAPH_H_
