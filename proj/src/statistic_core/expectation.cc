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

#include "dtstat/expectation.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace dtstat {
namespace {

[[noreturn]] void Unsupported(const std::string& what) {
  throw Error(ErrorKind::kConfigurationUnsupported, what);
}

void CheckTreePaths(const TreePathsConfig& cfg) {
  const int n = cfg.num_vertices;
  std::set<int> tree_vertices;
  std::vector<int> root(n);
  std::iota(root.begin(), root.end(), 0);
  auto find = [&](int x) {
    while (root[x] != x) x = root[x] = root[root[x]];
    return x;
  };
  for (auto [a, b] : cfg.tree_edges) {
    if (a < 0 || b < 0 || a >= n || b >= n || a == b) Unsupported("bad tree edge");
    if (find(a) == find(b)) Unsupported("tree edges contain a cycle");
    root[find(a)] = find(b);
    tree_vertices.insert(a);
    tree_vertices.insert(b);
  }
  if (tree_vertices.empty() && !cfg.tree_edges.empty()) Unsupported("empty tree");
  std::set<int> comps;
  for (int v : tree_vertices) comps.insert(find(v));
  if (comps.size() > 1) Unsupported("tree edges are disconnected");

  std::set<int> interior_seen;
  std::set<std::pair<int, int>> edges_seen;
  for (auto [a, b] : cfg.tree_edges) edges_seen.insert(std::minmax(a, b));
  for (const auto* side : {&cfg.paths_a, &cfg.paths_b}) {
    for (const auto& path : *side) {
      if (path.size() < 2) Unsupported("path without edges");
      for (int v : path) {
        if (v < 0 || v >= n) Unsupported("path vertex out of range");
      }
      const int x = path.front(), y = path.back();
      if (x == y) Unsupported("path endpoints coincide");
      if (!tree_vertices.count(x) || !tree_vertices.count(y)) {
        // A lone edge between tree vertices is allowed only when the tree is
        // empty; otherwise endpoints must be tree vertices.
        if (!tree_vertices.empty()) Unsupported("path endpoint off the tree");
      }
      for (size_t i = 1; i + 1 < path.size(); ++i) {
        if (tree_vertices.count(path[i]) || !interior_seen.insert(path[i]).second ||
            path[i] == x || path[i] == y) {
          Unsupported("paths must meet the tree and each other only at ends");
        }
      }
      for (size_t i = 1; i < path.size(); ++i) {
        if (!edges_seen.insert(std::minmax(path[i - 1], path[i])).second) {
          Unsupported("paths repeat an edge of the configuration");
        }
      }
    }
  }
  // Interior vertices must not be endpoints of other paths either.
  for (const auto* side : {&cfg.paths_a, &cfg.paths_b}) {
    for (const auto& path : *side) {
      if (interior_seen.count(path.front()) || interior_seen.count(path.back())) {
        Unsupported("path endpoint inside another path");
      }
    }
  }
}

}  // namespace

double ExpectedPhiTreePaths(const TreePathsConfig& cfg, const ModelParams& p,
                            Hypothesis h) {
  CheckTreePaths(cfg);
  const EdgeMoment first = ExactEdgeMoments(1, 0, p, true);
  if (h == Hypothesis::kQ) {
    // Independent graphs with independent labels: the two sides factor.
    auto side = [&](const std::vector<std::vector<int>>& paths) {
      std::vector<LabelFactor<double>> f;
      for (auto [a, b] : cfg.tree_edges) f.push_back({a, b, first.u, first.v});
      for (const auto& path : paths) {
        for (size_t i = 1; i < path.size(); ++i) {
          f.push_back({path[i - 1], path[i], first.u, first.v});
        }
      }
      return LabelAverage(cfg.num_vertices, f);
    };
    return side(cfg.paths_a) * side(cfg.paths_b);
  }
  // Under P each path collapses to v^length times the product of its
  // endpoint labels; the shared tree carries the mixed moment.
  const EdgeMoment mixed = ExactEdgeMoments(1, 1, p, true);
  const EdgeMoment second = ExactEdgeMoments(0, 1, p, true);
  double scale = 1.0;
  std::vector<LabelFactor<double>> f;
  for (auto [a, b] : cfg.tree_edges) f.push_back({a, b, mixed.u, mixed.v});
  for (const auto& path : cfg.paths_a) {
    scale *= std::pow(first.v, static_cast<double>(path.size() - 1));
    f.push_back({path.front(), path.back(), 0.0, 1.0});
  }
  for (const auto& path : cfg.paths_b) {
    scale *= std::pow(second.v, static_cast<double>(path.size() - 1));
    f.push_back({path.front(), path.back(), 0.0, 1.0});
  }
  return scale * LabelAverage(cfg.num_vertices, f);
}

double ExpectedPhiPair(const Multigraph& s1, const Multigraph& s2,
                       const ModelParams& p) {
  std::map<uint64_t, std::pair<uint32_t, uint32_t>> orders;
  for (const auto& [key, m] : s1.multiplicities()) orders[key].first = m;
  for (const auto& [key, m] : s2.multiplicities()) orders[key].second = m;
  std::map<Vertex, int> index;
  auto id = [&](Vertex v) {
    auto it = index.find(v);
    if (it != index.end()) return it->second;
    const int k = static_cast<int>(index.size());
    index.emplace(v, k);
    return k;
  };
  std::map<std::pair<uint32_t, uint32_t>, EdgeMoment> cache;
  std::vector<LabelFactor<double>> f;
  for (const auto& [key, rt] : orders) {
    const Vertex a = static_cast<Vertex>(key >> 32);
    const Vertex b = static_cast<Vertex>(key & 0xffffffffu);
    auto it = cache.find(rt);
    if (it == cache.end()) {
      it = cache.emplace(rt, ExactEdgeMoments(rt.first, rt.second, p, true)).first;
    }
    f.push_back({id(a), id(b), it->second.u, it->second.v});
  }
  return LabelAverage(static_cast<int>(index.size()), f);
}

double ExpectedPhiPair(const Embedding& e1, const DecoratedTreeShape& h1,
                       const Embedding& e2, const DecoratedTreeShape& h2,
                       const std::vector<Vertex>& pi, const ModelParams& p) {
  Embedding moved = e1;
  for (auto& v : moved.tree_vertices) v = pi[v];
  for (auto& path : moved.paths) {
    for (auto& v : path) v = pi[v];
  }
  return ExpectedPhiPair(moved.ToMultigraph(h1, p.n), e2.ToMultigraph(h2, p.n),
                         p);
}

}  // namespace dtstat
