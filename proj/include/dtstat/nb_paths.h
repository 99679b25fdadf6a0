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

// Weighted sums over non-backtracking walks whose first and last interior
// vertices lie in a designated set J.

#ifndef DTSTAT_NB_PATHS_H_
#define DTSTAT_NB_PATHS_H_

#include <vector>

#include "dtstat/graph.h"

namespace dtstat {

// Sum over walks x = w_0, ..., w_len = y with w_{i+1} != w_{i-1},
// w_1, w_{len-1} in J, of the product of M weights along the walk. Walks may
// revisit x and y. Requires x != y, x and y outside J; throws kInvalidLength
// when len < 2.
double NbPathSum(const WeightedGraph& m, Vertex x, Vertex y, int len,
                 const VertexSet& j);

// Explicit list of the walks counted by NbPathSum, each as len+1 vertices.
std::vector<std::vector<Vertex>> NbPathEnumerate(const WeightedGraph& m,
                                                 Vertex x, Vertex y, int len,
                                                 const VertexSet& j);

// Product of M weights along a vertex sequence.
double WalkWeight(const WeightedGraph& m, const std::vector<Vertex>& walk);

}  // namespace dtstat

#endif  // DTSTAT_NB_PATHS_H_
