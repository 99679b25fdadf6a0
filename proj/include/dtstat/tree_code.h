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

// Canonical codes and automorphisms of rooted and free trees.

#ifndef DTSTAT_TREE_CODE_H_
#define DTSTAT_TREE_CODE_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dtstat/graph.h"

namespace dtstat {

// Adjacency lists of a tree on vertices 0..size-1.
using TreeAdjacency = std::vector<std::vector<int>>;

// An unlabeled tree in canonical form. The code is the AHU parenthesis
// string of the tree rooted at `root` (the given root, or the center for free
// trees). `parent` is the canonical labelling: vertices are numbered in
// preorder with children visited in increasing code order, so vertex 0 is the
// root and parent[0] == -1.
struct CanonicalTree {
  std::string code;
  int size = 0;
  bool rooted = false;
  uint64_t aut = 0;
  std::vector<int> parent;

  TreeAdjacency Adjacency() const;
  std::vector<std::vector<int>> Children() const;

  bool operator==(const CanonicalTree& o) const {
    return rooted == o.rooted && code == o.code;
  }
  bool operator!=(const CanonicalTree& o) const { return !(*this == o); }
  bool operator<(const CanonicalTree& o) const {
    return rooted != o.rooted ? rooted < o.rooted : code < o.code;
  }
};

// Throws kNotATree unless `t` is connected and acyclic.
CanonicalTree CanonicalCode(const SimpleGraph& t,
                            std::optional<Vertex> root = std::nullopt);
CanonicalTree CanonicalCode(const TreeAdjacency& t,
                            std::optional<int> root = std::nullopt);

// Rebuilds the canonical labelling from a code string.
CanonicalTree TreeFromCode(const std::string& code, bool rooted);

// |Aut(T)|; rooted trees count root-fixing automorphisms only.
uint64_t AutomorphismCount(const CanonicalTree& t);

std::string RootedCode(const TreeAdjacency& t, int root);
// One or two centers, in increasing vertex order.
std::vector<int> TreeCenters(const TreeAdjacency& t);
// Number of vertices of t; throws kNotATree when t is not a tree.
void CheckTree(const TreeAdjacency& t);

// Enumerates automorphisms as vertex permutations perm[v] = image of v.
// The callback returns false to stop early. Throws kBudgetExceeded after
// `budget` permutations.
using PermutationSink = std::function<bool(const std::vector<int>&)>;
void ForEachAutomorphism(const TreeAdjacency& t, const PermutationSink& sink,
                         uint64_t budget = 10'000'000);
void ForEachRootedAutomorphism(const TreeAdjacency& t, int root,
                               const PermutationSink& sink,
                               uint64_t budget = 10'000'000);

}  // namespace dtstat

#endif  // DTSTAT_TREE_CODE_H_
