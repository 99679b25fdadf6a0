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

#include "dtstat/tree_enum.h"

#include <algorithm>
#include <map>
#include <set>
#include <string>

#include "dtstat/errors.h"

namespace dtstat {
namespace {

using Layout = std::vector<int>;

// Successor of a rooted level sequence in reverse lexicographic order
// (Beyer-Hedetniemi). Starts the search at position p, or at the last
// non-unit level when p < 0. Returns an empty layout after the last tree.
Layout NextRootedTree(const Layout& pred, int p = -1) {
  if (p < 0) {
    p = static_cast<int>(pred.size()) - 1;
    while (pred[p] == 1) --p;
  }
  if (p == 0) return {};
  int q = p - 1;
  while (pred[q] != pred[p] - 1) --q;
  Layout result = pred;
  for (size_t i = p; i < result.size(); ++i) result[i] = result[i - p + q];
  return result;
}

// Splits off the first subtree of the root: `left` is that subtree with its
// levels shifted up by one, `rest` is the tree with it removed.
void SplitTree(const Layout& layout, Layout* left, Layout* rest) {
  size_t m = layout.size();
  bool one_found = false;
  for (size_t i = 0; i < layout.size(); ++i) {
    if (layout[i] == 1) {
      if (one_found) {
        m = i;
        break;
      }
      one_found = true;
    }
  }
  left->clear();
  rest->assign(1, 0);
  for (size_t i = 1; i < m; ++i) left->push_back(layout[i] - 1);
  for (size_t i = m; i < layout.size(); ++i) rest->push_back(layout[i]);
}

// Wright-Richmond-Odlyzko-McKay filter: accepts level sequences that are the
// canonical center rooting of a free tree, otherwise jumps ahead.
Layout NextFreeTree(const Layout& candidate) {
  Layout left, rest;
  SplitTree(candidate, &left, &rest);
  const int left_height = *std::max_element(left.begin(), left.end());
  const int rest_height = *std::max_element(rest.begin(), rest.end());
  bool valid = rest_height >= left_height;
  if (valid && rest_height == left_height) {
    if (left.size() > rest.size()) {
      valid = false;
    } else if (left.size() == rest.size() && left > rest) {
      valid = false;
    }
  }
  if (valid) return candidate;

  const int p = static_cast<int>(left.size());
  Layout next = NextRootedTree(candidate, p);
  if (next.empty()) return next;
  if (candidate[p] > 2) {
    Layout new_left, new_rest;
    SplitTree(next, &new_left, &new_rest);
    const int new_left_height =
        *std::max_element(new_left.begin(), new_left.end());
    const int suffix = new_left_height + 1;
    for (int i = 0; i < suffix; ++i) {
      next[next.size() - suffix + i] = i + 1;
    }
  }
  return next;
}

TreeAdjacency LayoutToAdjacency(const Layout& layout) {
  const int n = static_cast<int>(layout.size());
  TreeAdjacency t(n);
  std::vector<int> last_at_level(n + 1, -1);
  for (int i = 0; i < n; ++i) {
    const int level = layout[i];
    if (level > 0) {
      const int parent = last_at_level[level - 1];
      t[i].push_back(parent);
      t[parent].push_back(i);
    }
    last_at_level[level] = i;
  }
  return t;
}

BigInt Binomial(const BigInt& a, int k) {
  BigInt result = 1;
  for (int i = 1; i <= k; ++i) {
    result *= (a - k + i);
    result /= i;
  }
  return result;
}

// Sum over child-size multiplicities (mu_1, ..., mu_max) with total size
// `remaining`, at most `slots` children, of prod binom(G_i + mu_i - 1, mu_i).
BigInt SumOverChildMultisets(const std::vector<BigInt>& gamma, int size,
                             int remaining, int slots) {
  if (remaining == 0) return 1;
  if (size == 0 || slots == 0) return 0;
  BigInt total = 0;
  for (int mu = 0; mu * size <= remaining && mu <= slots; ++mu) {
    const BigInt ways = Binomial(gamma[size] + mu - 1, mu);
    if (ways == 0) continue;
    total += ways * SumOverChildMultisets(gamma, size - 1,
                                          remaining - mu * size, slots - mu);
  }
  return total;
}

}  // namespace

std::vector<std::vector<int>> FreeTreeLevelSequences(int n) {
  if (n < 1) throw Error(ErrorKind::kInvalidArgument, "tree size must be >= 1");
  if (n > kMaxEnumerationSize) {
    throw Error(ErrorKind::kSizeTooLarge,
                "free-tree enumeration capped at " +
                    std::to_string(kMaxEnumerationSize) + " vertices");
  }
  if (n == 1) return {{0}};
  if (n == 2) return {{0, 1}};
  std::vector<Layout> out;
  // Start from the path rooted at its center.
  Layout layout;
  for (int i = 0; i <= n / 2; ++i) layout.push_back(i);
  for (int i = 1; i < (n + 1) / 2; ++i) layout.push_back(i);
  while (!layout.empty()) {
    layout = NextFreeTree(layout);
    if (layout.empty()) break;
    out.push_back(layout);
    layout = NextRootedTree(layout);
  }
  return out;
}

std::vector<CanonicalTree> EnumerateFreeTrees(int n) {
  std::vector<CanonicalTree> trees;
  for (const Layout& layout : FreeTreeLevelSequences(n)) {
    trees.push_back(CanonicalCode(LayoutToAdjacency(layout)));
  }
  return trees;
}

std::vector<CanonicalTree> EnumerateRootedTrees(int n) {
  std::set<std::string> codes;
  for (const CanonicalTree& free_tree : EnumerateFreeTrees(n)) {
    const TreeAdjacency adj = free_tree.Adjacency();
    for (int r = 0; r < n; ++r) codes.insert(RootedCode(adj, r));
  }
  std::vector<CanonicalTree> out;
  out.reserve(codes.size());
  for (const auto& code : codes) out.push_back(TreeFromCode(code, true));
  return out;
}

BigInt CountRootedTrees(int n, int max_children) {
  if (n < 1 || max_children < 1) {
    throw Error(ErrorKind::kInvalidArgument,
                "need n >= 1 and a positive child bound");
  }
  std::vector<BigInt> gamma(n + 1, 0);
  gamma[1] = 1;
  for (int m = 1; m < n; ++m) {
    gamma[m + 1] = SumOverChildMultisets(gamma, m, m, max_children);
  }
  return gamma[n];
}

}  // namespace dtstat
