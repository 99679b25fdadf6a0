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

// Embeddings of decorated trees and the exact statistic.

#ifndef DTSTAT_STATISTIC_H_
#define DTSTAT_STATISTIC_H_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "dtstat/family.h"
#include "dtstat/graph.h"
#include "dtstat/sbm.h"
#include "json.hpp"

namespace dtstat {

// Self-avoiding or non-backtracking attached paths.
enum class PathMode { kSaw, kNb };

const char* PathModeName(PathMode mode);
PathMode ParsePathMode(const std::string& name);  // "saw" | "nb"

inline constexpr uint64_t kDefaultEmbeddingBudget = 200'000'000;

// One realisation of a shape in [n]. tree_vertices[v] is the image of
// canonical tree vertex v; paths[k] runs from the image of pairs[k].first to
// the image of pairs[k].second and has path_len + 1 vertices.
struct Embedding {
  std::vector<Vertex> tree_vertices;
  std::vector<std::vector<Vertex>> paths;
  PathMode mode = PathMode::kNb;

  // Tree edges and path edges with repetition.
  Multigraph ToMultigraph(const DecoratedTreeShape& shape, int n) const;
};

// Identity of the multigraph decomposition: sorted tree edges, and
// orientation-normalised paths sorted.
std::string EmbeddingKey(const Embedding& e, const DecoratedTreeShape& shape);

// Free-tree automorphisms of the shape's tree that map the set of pairs onto
// itself.
std::vector<std::vector<int>> PairingAutomorphisms(
    const DecoratedTreeShape& shape);

// Direct check of every Embedding invariant.
bool IsValidEmbedding(const Embedding& e, const DecoratedTreeShape& shape,
                      const VertexSet& j);

// Streams each embedding once (one representative per automorphism class).
// Tree vertices move along host.ForEachNeighbor, so zero-weight pairs of a
// sparse host are skipped. Throws kBudgetExceeded when more than `budget`
// embeddings would be produced. The sink returns false to stop.
void EnumerateEmbeddings(const WeightedGraph& host,
                         const DecoratedTreeShape& shape, const VertexSet& j,
                         PathMode mode,
                         const std::function<bool(const Embedding&)>& sink,
                         uint64_t budget = kDefaultEmbeddingBudget);

// Product of host weights over all tree and path edges.
double Phi(const WeightedGraph& m, const Embedding& e,
           const DecoratedTreeShape& shape);

// Sum of Phi over all embeddings, optionally restricted to tree images that
// are colourful under `coloring`. Path factors are summed per endpoint pair,
// and the per-tree-image terms are added with a pairwise reduction in
// enumeration order. `budget` caps the number of tree images.
double EmbeddingSum(const WeightedGraph& m, const DecoratedTreeShape& shape,
                    const VertexSet& j, PathMode mode,
                    const VertexColoring* coloring = nullptr,
                    uint64_t budget = kDefaultEmbeddingBudget);

// log of s^(aleph-1) Aut(T) (eps^2 lambda s)^(l p) / n^(aleph + l p).
double ShapeLogWeight(const DecoratedTreeShape& shape, const ModelParams& p);

struct ShapeTerm {
  std::string tree_code;
  int pairing_id = 0;
  double sum_a = 0.0;
  double sum_b = 0.0;
  double weight = 0.0;
};

struct StatisticReport {
  PathMode mode = PathMode::kNb;
  std::string family_hash;
  double value = 0.0;
  std::vector<ShapeTerm> per_shape;
};

nlohmann::json ReportToJson(const StatisticReport& r);

// Index of each shape among the shapes sharing its tree.
std::vector<int> PairingIds(const Family& family);

// The exact statistic with standardised entries.
StatisticReport FExact(const SimpleGraph& a, const SimpleGraph& b,
                       const Family& family, const VertexSet& j_a,
                       const VertexSet& j_b, const ModelParams& p,
                       PathMode mode,
                       uint64_t budget = kDefaultEmbeddingBudget);

// Sum of xs by recursive halving; fixed association for a fixed length.
double PairwiseSum(const double* xs, size_t n);
inline double PairwiseSum(const std::vector<double>& xs) {
  return PairwiseSum(xs.data(), xs.size());
}

}  // namespace dtstat

#endif  // DTSTAT_STATISTIC_H_
