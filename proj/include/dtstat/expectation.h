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

// Exact expectations of products of standardised entries, averaged over the
// hidden labels.

#ifndef DTSTAT_EXPECTATION_H_
#define DTSTAT_EXPECTATION_H_

#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

#include "dtstat/errors.h"
#include "dtstat/graph.h"
#include "dtstat/sbm.h"
#include "dtstat/statistic.h"

namespace dtstat {

// One factor u + v sigma_a sigma_b.
template <typename T>
struct LabelFactor {
  int a = 0;
  int b = 0;
  T u{};
  T v{};
};

inline constexpr int kMaxCycleRank = 26;

// E over uniform sigma in {-1,+1}^V of prod (u_e + v_e sigma_a sigma_b).
// Expanding the product, a subset F of factors survives the average iff
// every vertex meets F an even number of times, so the sum runs over the
// cycle space of the factor multigraph. Parallel factors are allowed.
template <typename T>
T LabelAverage(int num_vertices, const std::vector<LabelFactor<T>>& factors) {
  const int m = static_cast<int>(factors.size());
  // Spanning forest by union-find; every other factor closes one
  // fundamental cycle.
  std::vector<int> root(num_vertices);
  std::iota(root.begin(), root.end(), 0);
  auto find = [&](int x) {
    while (root[x] != x) x = root[x] = root[root[x]];
    return x;
  };
  std::vector<std::vector<std::pair<int, int>>> forest(num_vertices);
  std::vector<int> chords;
  for (int e = 0; e < m; ++e) {
    const int ra = find(factors[e].a), rb = find(factors[e].b);
    if (factors[e].a == factors[e].b) {
      throw Error(ErrorKind::kInvalidArgument, "label factor on a loop");
    }
    if (ra == rb) {
      chords.push_back(e);
    } else {
      root[ra] = rb;
      forest[factors[e].a].push_back({factors[e].b, e});
      forest[factors[e].b].push_back({factors[e].a, e});
    }
  }
  const int rank = static_cast<int>(chords.size());
  if (rank > kMaxCycleRank) {
    throw Error(ErrorKind::kConfigurationUnsupported,
                "cycle space too large for exact label averaging");
  }
  // Forest path between two vertices as a factor mask.
  auto forest_path = [&](int from, int to) {
    std::vector<int> parent_edge(num_vertices, -1), parent(num_vertices, -1);
    std::vector<int> stack{from};
    parent[from] = from;
    while (!stack.empty()) {
      const int x = stack.back();
      stack.pop_back();
      for (auto [y, e] : forest[x]) {
        if (parent[y] < 0) {
          parent[y] = x;
          parent_edge[y] = e;
          stack.push_back(y);
        }
      }
    }
    std::vector<char> mask(m, 0);
    for (int x = to; x != from; x = parent[x]) mask[parent_edge[x]] ^= 1;
    return mask;
  };
  std::vector<std::vector<char>> cycles;
  for (int c : chords) {
    auto mask = forest_path(factors[c].a, factors[c].b);
    mask[c] ^= 1;
    cycles.push_back(std::move(mask));
  }
  T total{};
  std::vector<char> in(m, 0);
  // Gray-code walk over all 2^rank even subgraphs.
  for (uint64_t step = 0; step < (uint64_t{1} << rank); ++step) {
    if (step > 0) {
      const int flip = __builtin_ctzll(step);
      for (int e = 0; e < m; ++e) in[e] ^= cycles[flip][e];
    }
    T term = T(1);
    for (int e = 0; e < m; ++e) term *= in[e] ? factors[e].v : factors[e].u;
    total += term;
  }
  return total;
}

enum class Hypothesis { kP, kQ };

// A tree with self-avoiding paths hanging between tree vertices. Paths of
// `paths_a` belong to the A-side subgraph S, those of `paths_b` to the B-side
// subgraph K; the tree is shared, so S and K meet exactly in it.
struct TreePathsConfig {
  int num_vertices = 0;
  std::vector<std::pair<int, int>> tree_edges;
  std::vector<std::vector<int>> paths_a;
  std::vector<std::vector<int>> paths_b;
};

// E[phi_S(A) phi_K(B)] at the identity alignment under P, or under Q with
// independent graphs and labels. Throws kConfigurationUnsupported when the
// tree is not a tree or a path meets the tree or another path away from its
// endpoints.
double ExpectedPhiTreePaths(const TreePathsConfig& cfg, const ModelParams& p,
                            Hypothesis h);

// E[phi_{S1}(A) phi_{S2}(B)] under P with B aligned by identity, from the
// per-edge moments of multiplicities (r, t). Vertices are [n] of the inputs.
double ExpectedPhiPair(const Multigraph& s1, const Multigraph& s2,
                       const ModelParams& p);

// Same after moving S1 by the permutation pi (vertex i -> pi[i]).
double ExpectedPhiPair(const Embedding& e1, const DecoratedTreeShape& h1,
                       const Embedding& e2, const DecoratedTreeShape& h2,
                       const std::vector<Vertex>& pi, const ModelParams& p);

}  // namespace dtstat

#endif  // DTSTAT_EXPECTATION_H_
