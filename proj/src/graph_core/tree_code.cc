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

#include "dtstat/tree_code.h"

#include <algorithm>
#include <map>

#include "dtstat/errors.h"

namespace dtstat {
namespace {

// Parent array of t rooted at `root` (parent[root] = -1) and a BFS order.
void RootAt(const TreeAdjacency& t, int root, std::vector<int>* parent,
            std::vector<int>* order) {
  const int n = static_cast<int>(t.size());
  parent->assign(n, -2);
  order->clear();
  (*parent)[root] = -1;
  order->push_back(root);
  for (size_t head = 0; head < order->size(); ++head) {
    const int u = (*order)[head];
    for (int w : t[u]) {
      if ((*parent)[w] == -2) {
        (*parent)[w] = u;
        order->push_back(w);
      }
    }
  }
}

// Codes of every subtree of t rooted at `root`.
std::vector<std::string> SubtreeCodes(const TreeAdjacency& t, int root,
                                      std::vector<int>* parent_out = nullptr) {
  std::vector<int> parent, order;
  RootAt(t, root, &parent, &order);
  std::vector<std::string> code(t.size());
  std::vector<std::vector<std::string>> pieces(t.size());
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const int u = *it;
    auto& kids = pieces[u];
    std::sort(kids.begin(), kids.end());
    std::string c = "(";
    for (const auto& k : kids) c += k;
    c += ")";
    code[u] = std::move(c);
    if (parent[u] >= 0) pieces[parent[u]].push_back(code[u]);
  }
  if (parent_out != nullptr) *parent_out = std::move(parent);
  return code;
}

uint64_t Factorial(int k) {
  uint64_t f = 1;
  for (int i = 2; i <= k; ++i) f *= static_cast<uint64_t>(i);
  return f;
}

uint64_t RootedAut(const TreeAdjacency& t, int root) {
  std::vector<int> parent;
  const auto code = SubtreeCodes(t, root, &parent);
  uint64_t aut = 1;
  for (int u = 0; u < static_cast<int>(t.size()); ++u) {
    std::map<std::string, int> groups;
    for (int w : t[u]) {
      if (w != parent[u]) ++groups[code[w]];
    }
    for (const auto& [c, m] : groups) aut *= Factorial(m);
  }
  return aut;
}

TreeAdjacency FromSimpleGraph(const SimpleGraph& g) {
  TreeAdjacency t(g.n());
  for (Vertex v = 0; v < g.n(); ++v) {
    for (const auto& nb : g.neighbors(v)) t[v].push_back(nb.to);
  }
  return t;
}

// Backtracking over code-preserving child bijections.
class AutomorphismSearch {
 public:
  AutomorphismSearch(const TreeAdjacency& t, const PermutationSink& sink,
                     uint64_t budget)
      : t_(t), sink_(sink), budget_(budget) {}

  // Enumerates isomorphisms of (t, from) onto (t, to); returns false if the
  // sink asked to stop.
  bool Run(int from, int to) {
    code_from_ = SubtreeCodes(t_, from, &parent_from_);
    code_to_ = SubtreeCodes(t_, to, &parent_to_);
    if (code_from_[from] != code_to_[to]) return true;
    perm_.assign(t_.size(), -1);
    perm_[from] = to;
    return Expand({{from, to}});
  }

 private:
  std::vector<int> Kids(int u, const std::vector<int>& parent) const {
    std::vector<int> kids;
    for (int w : t_[u]) {
      if (w != parent[u]) kids.push_back(w);
    }
    return kids;
  }

  bool Expand(std::vector<std::pair<int, int>> frontier) {
    if (frontier.empty()) {
      if (++emitted_ > budget_) {
        throw Error(ErrorKind::kBudgetExceeded,
                    "automorphism enumeration budget exhausted");
      }
      return sink_(perm_);
    }
    const auto [u, w] = frontier.back();
    frontier.pop_back();
    const auto src = Kids(u, parent_from_);
    auto dst = Kids(w, parent_to_);
    std::vector<char> used(dst.size(), 0);
    return MatchChildren(src, dst, 0, &used, &frontier);
  }

  bool MatchChildren(const std::vector<int>& src, const std::vector<int>& dst,
                     size_t i, std::vector<char>* used,
                     std::vector<std::pair<int, int>>* frontier) {
    if (i == src.size()) return Expand(*frontier);
    for (size_t j = 0; j < dst.size(); ++j) {
      if ((*used)[j] || code_from_[src[i]] != code_to_[dst[j]]) continue;
      (*used)[j] = 1;
      perm_[src[i]] = dst[j];
      frontier->push_back({src[i], dst[j]});
      const bool keep_going = MatchChildren(src, dst, i + 1, used, frontier);
      frontier->pop_back();
      perm_[src[i]] = -1;
      (*used)[j] = 0;
      if (!keep_going) return false;
    }
    return true;
  }

  const TreeAdjacency& t_;
  const PermutationSink& sink_;
  uint64_t budget_;
  uint64_t emitted_ = 0;
  std::vector<std::string> code_from_, code_to_;
  std::vector<int> parent_from_, parent_to_;
  std::vector<int> perm_;
};

}  // namespace

TreeAdjacency CanonicalTree::Adjacency() const {
  TreeAdjacency t(size);
  for (int v = 1; v < size; ++v) {
    t[v].push_back(parent[v]);
    t[parent[v]].push_back(v);
  }
  return t;
}

std::vector<std::vector<int>> CanonicalTree::Children() const {
  std::vector<std::vector<int>> kids(size);
  for (int v = 1; v < size; ++v) kids[parent[v]].push_back(v);
  return kids;
}

void CheckTree(const TreeAdjacency& t) {
  const int n = static_cast<int>(t.size());
  if (n == 0) throw Error(ErrorKind::kNotATree, "empty vertex set");
  int64_t degree_sum = 0;
  for (const auto& nbrs : t) degree_sum += static_cast<int64_t>(nbrs.size());
  if (degree_sum != 2 * static_cast<int64_t>(n - 1)) {
    throw Error(ErrorKind::kNotATree, "edge count is not n-1");
  }
  std::vector<int> parent, order;
  RootAt(t, 0, &parent, &order);
  if (static_cast<int>(order.size()) != n) {
    throw Error(ErrorKind::kNotATree, "graph is disconnected");
  }
}

std::string RootedCode(const TreeAdjacency& t, int root) {
  return SubtreeCodes(t, root)[root];
}

std::vector<int> TreeCenters(const TreeAdjacency& t) {
  const int n = static_cast<int>(t.size());
  if (n <= 2) {
    std::vector<int> all(n);
    for (int i = 0; i < n; ++i) all[i] = i;
    return all;
  }
  std::vector<int> degree(n);
  std::vector<int> layer;
  for (int v = 0; v < n; ++v) {
    degree[v] = static_cast<int>(t[v].size());
    if (degree[v] <= 1) layer.push_back(v);
  }
  int remaining = n;
  while (remaining > 2) {
    remaining -= static_cast<int>(layer.size());
    std::vector<int> next;
    for (int v : layer) {
      for (int w : t[v]) {
        if (--degree[w] == 1) next.push_back(w);
      }
    }
    layer = std::move(next);
  }
  std::sort(layer.begin(), layer.end());
  return layer;
}

CanonicalTree TreeFromCode(const std::string& code, bool rooted) {
  CanonicalTree tree;
  tree.code = code;
  tree.rooted = rooted;
  std::vector<int> stack;
  for (char ch : code) {
    if (ch == '(') {
      const int v = static_cast<int>(tree.parent.size());
      tree.parent.push_back(stack.empty() ? -1 : stack.back());
      stack.push_back(v);
    } else if (ch == ')') {
      if (stack.empty()) {
        throw Error(ErrorKind::kParseError, "unbalanced tree code");
      }
      stack.pop_back();
    } else {
      throw Error(ErrorKind::kParseError, "unexpected character in code");
    }
  }
  if (!stack.empty() || tree.parent.empty() ||
      std::count(tree.parent.begin(), tree.parent.end(), -1) != 1) {
    throw Error(ErrorKind::kParseError, "malformed tree code");
  }
  tree.size = static_cast<int>(tree.parent.size());
  tree.aut = AutomorphismCount(tree);
  return tree;
}

CanonicalTree CanonicalCode(const TreeAdjacency& t, std::optional<int> root) {
  CheckTree(t);
  if (root.has_value()) {
    if (*root < 0 || *root >= static_cast<int>(t.size())) {
      throw Error(ErrorKind::kInvalidArgument, "root out of range");
    }
    return TreeFromCode(RootedCode(t, *root), true);
  }
  std::string best;
  for (int c : TreeCenters(t)) {
    std::string code = RootedCode(t, c);
    if (best.empty() || code < best) best = std::move(code);
  }
  return TreeFromCode(best, false);
}

CanonicalTree CanonicalCode(const SimpleGraph& t, std::optional<Vertex> root) {
  std::optional<int> r;
  if (root.has_value()) r = *root;
  return CanonicalCode(FromSimpleGraph(t), r);
}

uint64_t AutomorphismCount(const CanonicalTree& t) {
  const TreeAdjacency adj = t.Adjacency();
  const uint64_t at_root = RootedAut(adj, 0);
  if (t.rooted) return at_root;
  const std::string root_code = RootedCode(adj, 0);
  uint64_t orbit = 0;
  for (int c : TreeCenters(adj)) {
    if (RootedCode(adj, c) == root_code) ++orbit;
  }
  return at_root * orbit;
}

void ForEachAutomorphism(const TreeAdjacency& t, const PermutationSink& sink,
                         uint64_t budget) {
  CheckTree(t);
  const auto centers = TreeCenters(t);
  AutomorphismSearch search(t, sink, budget);
  for (int c : centers) {
    if (!search.Run(centers.front(), c)) return;
  }
}

void ForEachRootedAutomorphism(const TreeAdjacency& t, int root,
                               const PermutationSink& sink, uint64_t budget) {
  CheckTree(t);
  AutomorphismSearch search(t, sink, budget);
  search.Run(root, root);
}

}  // namespace dtstat
