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

#include <algorithm>
#include <set>
#include <sstream>
#include <unordered_map>

#include "dtstat/errors.h"
#include "dtstat/nb_paths.h"
#include "dtstat/statistic.h"

namespace dtstat {
namespace {

// Walks x = w_0, ..., w_len = y with w_1 and w_{len-1} in J, in a fixed
// depth-first order. NB forbids immediate reversal; SAW forbids any repeat.
template <typename Visit>
void ForEachWalk(const WeightedGraph& m, Vertex x, Vertex y, int len,
                 const VertexSet& j, PathMode mode, Visit&& visit) {
  std::vector<Vertex> walk{x};
  walk.reserve(len + 1);
  auto extend = [&](auto&& self) -> void {
    const int step = static_cast<int>(walk.size());
    const Vertex at = walk.back();
    const Vertex before = step >= 2 ? walk[step - 2] : -1;
    m.ForEachNeighbor(at, [&](Vertex w, double) {
      if (w == before) return;
      if (step == len) {
        if (w != y) return;
      } else if ((step == 1 || step == len - 1) && !j.Contains(w)) {
        return;
      }
      if (mode == PathMode::kSaw &&
          std::find(walk.begin(), walk.end(), w) != walk.end()) {
        return;
      }
      walk.push_back(w);
      if (step == len) {
        visit(walk);
      } else {
        self(self);
      }
      walk.pop_back();
    });
  };
  extend(extend);
}

// Depth-first maps of the canonical tree into [n] \ J, one per orbit of the
// pairing automorphisms. Calls visit(psi) and stops when it returns false.
template <typename Visit>
void ForEachTreeImage(const WeightedGraph& m, const DecoratedTreeShape& shape,
                      const VertexSet& j,
                      const std::vector<std::vector<int>>& auts,
                      uint64_t budget, Visit&& visit) {
  const int k = shape.tree.size;
  const auto& parent = shape.tree.parent;
  std::vector<Vertex> psi(k, -1);
  std::vector<char> used(m.n(), 0);
  uint64_t emitted = 0;
  bool stop = false;

  auto is_canonical = [&] {
    for (const auto& alpha : auts) {
      for (int v = 0; v < k; ++v) {
        const Vertex mapped = psi[alpha[v]];
        if (mapped < psi[v]) return false;
        if (mapped > psi[v]) break;
      }
    }
    return true;
  };

  auto place = [&](auto&& self, int v) -> void {
    if (stop) return;
    if (v == k) {
      if (!is_canonical()) return;
      if (++emitted > budget) {
        throw Error(ErrorKind::kBudgetExceeded,
                    "embedding enumeration exceeded its budget");
      }
      if (!visit(psi)) stop = true;
      return;
    }
    auto try_vertex = [&](Vertex w) {
      if (stop || used[w] || j.Contains(w)) return;
      psi[v] = w;
      used[w] = 1;
      self(self, v + 1);
      used[w] = 0;
      psi[v] = -1;
    };
    if (v == 0) {
      for (Vertex w = 0; w < m.n() && !stop; ++w) try_vertex(w);
    } else {
      m.ForEachNeighbor(psi[parent[v]], [&](Vertex w, double) { try_vertex(w); });
    }
  };
  if (k <= m.n()) place(place, 0);
}

}  // namespace

const char* PathModeName(PathMode mode) {
  return mode == PathMode::kSaw ? "saw" : "nb";
}

PathMode ParsePathMode(const std::string& name) {
  if (name == "saw") return PathMode::kSaw;
  if (name == "nb") return PathMode::kNb;
  throw Error(ErrorKind::kInvalidConfig, "unknown path mode '" + name + "'");
}

Multigraph Embedding::ToMultigraph(const DecoratedTreeShape& shape,
                                   int n) const {
  Multigraph g(n);
  for (Vertex v : tree_vertices) g.AddVertex(v);
  for (int v = 1; v < shape.tree.size; ++v) {
    g.AddEdge(tree_vertices[shape.tree.parent[v]], tree_vertices[v]);
  }
  for (const auto& p : paths) {
    for (size_t s = 1; s < p.size(); ++s) g.AddEdge(p[s - 1], p[s]);
  }
  return g;
}

std::vector<std::vector<int>> PairingAutomorphisms(
    const DecoratedTreeShape& shape) {
  std::set<std::pair<int, int>> pairs(shape.pairing.pairs.begin(),
                                      shape.pairing.pairs.end());
  std::vector<std::vector<int>> out;
  ForEachAutomorphism(shape.tree.Adjacency(), [&](const std::vector<int>& a) {
    for (const auto& [u, v] : pairs) {
      const auto image = std::minmax(a[u], a[v]);
      if (!pairs.count({image.first, image.second})) return true;
    }
    out.push_back(a);
    return true;
  });
  return out;
}

std::string EmbeddingKey(const Embedding& e, const DecoratedTreeShape& shape) {
  std::vector<std::pair<Vertex, Vertex>> edges;
  for (int v = 1; v < shape.tree.size; ++v) {
    const auto [a, b] = std::minmax(e.tree_vertices[shape.tree.parent[v]],
                                    e.tree_vertices[v]);
    edges.push_back({a, b});
  }
  std::sort(edges.begin(), edges.end());
  std::vector<std::vector<Vertex>> paths = e.paths;
  for (auto& p : paths) {
    if (p.front() > p.back()) std::reverse(p.begin(), p.end());
  }
  std::sort(paths.begin(), paths.end());
  std::ostringstream key;
  for (const auto& [a, b] : edges) key << a << '-' << b << ' ';
  key << '|';
  for (const auto& p : paths) {
    for (Vertex v : p) key << v << ',';
    key << ' ';
  }
  return key.str();
}

bool IsValidEmbedding(const Embedding& e, const DecoratedTreeShape& shape,
                      const VertexSet& j) {
  const int k = shape.tree.size;
  if (static_cast<int>(e.tree_vertices.size()) != k) return false;
  std::vector<Vertex> sorted = e.tree_vertices;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    return false;
  }
  for (Vertex v : sorted) {
    if (v < 0 || v >= j.n() || j.Contains(v)) return false;
  }
  if (e.paths.size() != shape.pairing.pairs.size()) return false;
  const int len = shape.path_len;
  for (size_t i = 0; i < e.paths.size(); ++i) {
    const auto& p = e.paths[i];
    if (static_cast<int>(p.size()) != len + 1) return false;
    if (p.front() != e.tree_vertices[shape.pairing.pairs[i].first] ||
        p.back() != e.tree_vertices[shape.pairing.pairs[i].second]) {
      return false;
    }
    if (!j.Contains(p[1]) || !j.Contains(p[len - 1])) return false;
    for (int s = 1; s <= len; ++s) {
      if (p[s] == p[s - 1]) return false;
      if (s >= 2 && p[s] == p[s - 2]) return false;
    }
    if (e.mode == PathMode::kSaw) {
      std::vector<Vertex> q = p;
      std::sort(q.begin(), q.end());
      if (std::adjacent_find(q.begin(), q.end()) != q.end()) return false;
    }
  }
  return true;
}

void EnumerateEmbeddings(const WeightedGraph& host,
                         const DecoratedTreeShape& shape, const VertexSet& j,
                         PathMode mode,
                         const std::function<bool(const Embedding&)>& sink,
                         uint64_t budget) {
  const auto auts = PairingAutomorphisms(shape);
  const auto& pairs = shape.pairing.pairs;
  const int num_pairs = static_cast<int>(pairs.size());
  uint64_t emitted = 0;
  bool stop = false;
  Embedding e;
  e.mode = mode;
  e.paths.resize(num_pairs);
  ForEachTreeImage(host, shape, j, auts, budget, [&](const std::vector<Vertex>& psi) {
    e.tree_vertices = psi;
    std::vector<std::vector<std::vector<Vertex>>> options(num_pairs);
    for (int i = 0; i < num_pairs; ++i) {
      ForEachWalk(host, psi[pairs[i].first], psi[pairs[i].second],
                  shape.path_len, j, mode,
                  [&](const std::vector<Vertex>& w) { options[i].push_back(w); });
      if (options[i].empty()) return true;
    }
    auto choose = [&](auto&& self, int i) -> void {
      if (stop) return;
      if (i == num_pairs) {
        if (++emitted > budget) {
          throw Error(ErrorKind::kBudgetExceeded,
                      "embedding enumeration exceeded its budget");
        }
        if (!sink(e)) stop = true;
        return;
      }
      for (const auto& w : options[i]) {
        e.paths[i] = w;
        self(self, i + 1);
        if (stop) return;
      }
    };
    choose(choose, 0);
    return !stop;
  });
}

double Phi(const WeightedGraph& m, const Embedding& e,
           const DecoratedTreeShape& shape) {
  double w = 1.0;
  for (int v = 1; v < shape.tree.size; ++v) {
    w *= m.Weight(e.tree_vertices[shape.tree.parent[v]], e.tree_vertices[v]);
  }
  for (const auto& p : e.paths) {
    for (size_t s = 1; s < p.size(); ++s) w *= m.Weight(p[s - 1], p[s]);
  }
  return w;
}

double EmbeddingSum(const WeightedGraph& m, const DecoratedTreeShape& shape,
                    const VertexSet& j, PathMode mode,
                    const VertexColoring* coloring, uint64_t budget) {
  const auto auts = PairingAutomorphisms(shape);
  const auto& pairs = shape.pairing.pairs;
  std::unordered_map<uint64_t, double> path_sum;
  auto paths_between = [&](Vertex x, Vertex y) {
    const uint64_t key = (static_cast<uint64_t>(x) << 32) | static_cast<uint32_t>(y);
    auto it = path_sum.find(key);
    if (it != path_sum.end()) return it->second;
    double total = 0.0;
    ForEachWalk(m, x, y, shape.path_len, j, mode,
                [&](const std::vector<Vertex>& w) { total += WalkWeight(m, w); });
    path_sum.emplace(key, total);
    return total;
  };
  std::vector<double> terms;
  ForEachTreeImage(m, shape, j, auts, budget, [&](const std::vector<Vertex>& psi) {
    if (coloring != nullptr && !Colorful(*coloring, psi)) return true;
    double w = 1.0;
    for (int v = 1; v < shape.tree.size && w != 0.0; ++v) {
      w *= m.Weight(psi[shape.tree.parent[v]], psi[v]);
    }
    for (const auto& [a, b] : pairs) {
      if (w == 0.0) break;
      w *= paths_between(psi[a], psi[b]);
    }
    terms.push_back(w);
    return true;
  });
  return PairwiseSum(terms);
}

double PairwiseSum(const double* xs, size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (size_t i = 0; i < n; ++i) s += xs[i];
    return s;
  }
  const size_t half = n / 2;
  return PairwiseSum(xs, half) + PairwiseSum(xs + half, n - half);
}

}  // namespace dtstat
