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

// Enumeration and counting of unlabeled trees.

#ifndef DTSTAT_TREE_ENUM_H_
#define DTSTAT_TREE_ENUM_H_

#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "dtstat/tree_code.h"

namespace dtstat {

using BigInt = boost::multiprecision::cpp_int;

inline constexpr int kMaxEnumerationSize = 20;

// All free trees on n vertices, one per isomorphism class, in generation
// order. Throws kSizeTooLarge for n > kMaxEnumerationSize.
std::vector<CanonicalTree> EnumerateFreeTrees(int n);

// Level sequences (preorder depths) of the free trees on n vertices, rooted at
// a center, in generation order.
std::vector<std::vector<int>> FreeTreeLevelSequences(int n);

// Distinct rooted trees on n vertices, sorted by code; built by rooting every
// free tree at every vertex.
std::vector<CanonicalTree> EnumerateRootedTrees(int n);

// Number of rooted unlabeled trees on n vertices in which every vertex has at
// most `max_children` children.
BigInt CountRootedTrees(int n, int max_children);

}  // namespace dtstat

#endif  // DTSTAT_TREE_ENUM_H_
