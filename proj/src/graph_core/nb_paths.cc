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

#include "dtstat/nb_paths.h"

#include <string>

#include "dtstat/errors.h"

namespace dtstat {
namespace {

void CheckQuery(const WeightedGraph& m, Vertex x, Vertex y, int len,
                const VertexSet& j) {
  if (len < 2) {
    throw Error(ErrorKind::kInvalidLength,
                "path length " + std::to_string(len) + " < 2");
  }
  if (x < 0 || y < 0 || x >= m.n() || y >= m.n() || x == y) {
    throw Error(ErrorKind::kInvalidArgument, "endpoints must be distinct");
  }
  if (j.n() != m.n()) {
    throw Error(ErrorKind::kInvalidArgument, "J lives on a different [n]");
  }
  if (j.Contains(x) || j.Contains(y)) {
    throw Error(ErrorKind::kInvalidArgument, "endpoints must lie outside J");
  }
}

// Directed edges grouped by tail vertex.
struct DirectedEdges {
  std::vector<int> offset;  // out-edges of u are [offset[u], offset[u+1])
  std::vector<Vertex> head;
  std::vector<double> weight;
};

DirectedEdges BuildDirected(const WeightedGraph& m) {
  DirectedEdges d;
  d.offset.assign(m.n() + 1, 0);
  for (Vertex u = 0; u < m.n(); ++u) {
    m.ForEachNeighbor(u, [&](Vertex w, double wt) {
      d.head.push_back(w);
      d.weight.push_back(wt);
    });
    d.offset[u + 1] = static_cast<int>(d.head.size());
  }
  return d;
}

}  // namespace

double NbPathSum(const WeightedGraph& m, Vertex x, Vertex y, int len,
                 const VertexSet& j) {
  CheckQuery(m, x, y, len, j);
  const DirectedEdges d = BuildDirected(m);
  const int num_edges = static_cast<int>(d.head.size());
  // tail[e] recovers the tail of directed edge e.
  std::vector<Vertex> tail(num_edges);
  for (Vertex u = 0; u < m.n(); ++u) {
    for (int e = d.offset[u]; e < d.offset[u + 1]; ++e) tail[e] = u;
  }

  std::vector<double> value(num_edges, 0.0), next(num_edges, 0.0);
  std::vector<char> queued(num_edges, 0);
  std::vector<int> live, next_live;
  for (int e = d.offset[x]; e < d.offset[x + 1]; ++e) {
    if (j.Contains(d.head[e])) {
      value[e] = d.weight[e];
      live.push_back(e);
    }
  }
  for (int step = 2; step < len; ++step) {
    const bool into_j = (step == len - 1);
    for (int e : live) {
      const Vertex from = tail[e];
      const Vertex at = d.head[e];
      for (int f = d.offset[at]; f < d.offset[at + 1]; ++f) {
        const Vertex to = d.head[f];
        if (to == from || (into_j && !j.Contains(to))) continue;
        if (!queued[f]) {
          queued[f] = 1;
          next_live.push_back(f);
        }
        next[f] += value[e] * d.weight[f];
      }
    }
    for (int e : live) value[e] = 0.0;
    for (int f : next_live) queued[f] = 0;
    live.swap(next_live);
    next_live.clear();
    value.swap(next);
  }
  double total = 0.0;
  for (int e : live) {
    const Vertex from = tail[e];
    const Vertex at = d.head[e];
    if (from == y) continue;  // final step would reverse
    total += value[e] * m.Weight(at, y);
  }
  return total;
}

std::vector<std::vector<Vertex>> NbPathEnumerate(const WeightedGraph& m,
                                                 Vertex x, Vertex y, int len,
                                                 const VertexSet& j) {
  CheckQuery(m, x, y, len, j);
  std::vector<std::vector<Vertex>> out;
  std::vector<Vertex> walk{x};
  auto extend = [&](auto&& self) -> void {
    const int step = static_cast<int>(walk.size());  // index of next vertex
    const Vertex at = walk.back();
    const Vertex before = step >= 2 ? walk[step - 2] : -1;
    m.ForEachNeighbor(at, [&](Vertex w, double) {
      if (w == before) return;
      if (step == len) {
        if (w != y) return;
      } else if ((step == 1 || step == len - 1) && !j.Contains(w)) {
        return;
      }
      walk.push_back(w);
      if (step == len) {
        out.push_back(walk);
      } else {
        self(self);
      }
      walk.pop_back();
    });
  };
  extend(extend);
  return out;
}

double WalkWeight(const WeightedGraph& m, const std::vector<Vertex>& walk) {
  double w = 1.0;
  for (size_t i = 1; i < walk.size(); ++i) w *= m.Weight(walk[i - 1], walk[i]);
  return w;
}

}  // namespace dtstat
