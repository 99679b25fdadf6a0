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
#include <cmath>
#include <functional>
#include <queue>

#include "dtstat/errors.h"
#include "dtstat/family.h"

namespace dtstat {

void FamilyConfig::Validate() const {
  auto fail = [](const std::string& what) {
    throw Error(ErrorKind::kInvalidConfig, what);
  };
  if (aleph < 3) fail("aleph must be at least 3");
  if (aleph > 20) fail("aleph above the enumeration cap of 20");
  if (num_pairs < 1) fail("num_pairs must be at least 1");
  if (2 * num_pairs > aleph - 1) fail("2*num_pairs must not exceed aleph-1");
  if (num_pairings < 1) fail("num_pairings must be at least 1");
  if (path_len < 2) fail("path_len must be at least 2");
  if (max_degree < 1) fail("max_degree must be positive");
  if (max_armpath < 1) fail("max_armpath must be positive");
  if (tiota_threshold < 1) fail("tiota_threshold must be positive");
  if (!(tiota_min_frac >= 0.0 && tiota_min_frac <= 1.0)) {
    fail("tiota_min_frac must lie in [0,1]");
  }
  if (!(sim_k_frac >= 0.0 && sim_k_frac <= 1.0)) {
    fail("sim_k_frac must lie in [0,1]");
  }
  if (sim_len < 0) fail("sim_len must be non-negative");
  if (pair_dist_lo < 1) fail("pair_dist_lo must be positive");
  if (pair_dist_lo > pair_dist_hi) fail("pair_dist_lo exceeds pair_dist_hi");
  if (pair_dist_hi >= cross_pair_dist) {
    fail("cross_pair_dist must exceed pair_dist_hi");
  }
  if (symdiff_min < 0) fail("symdiff_min must be non-negative");
  if (similarity_budget == 0) fail("similarity_budget must be positive");
}

RootedView::RootedView(const CanonicalTree& t)
    : parent(t.parent),
      children(t.Children()),
      des_size(t.size, 1),
      depth(t.size, 0),
      subtree_code(t.size) {
  const int n = t.size;
  // Canonical labels are a preorder, so parents precede children.
  for (int v = 1; v < n; ++v) depth[v] = depth[parent[v]] + 1;
  for (int v = n - 1; v >= 0; --v) {
    std::vector<std::string> kids;
    for (int c : children[v]) {
      des_size[v] += des_size[c];
      kids.push_back(subtree_code[c]);
    }
    std::sort(kids.begin(), kids.end());
    std::string code = "(";
    for (const auto& k : kids) code += k;
    subtree_code[v] = code + ")";
  }
  const TreeAdjacency adj = t.Adjacency();
  dist.assign(n, std::vector<int>(n, -1));
  for (int s = 0; s < n; ++s) {
    std::queue<int> q;
    dist[s][s] = 0;
    q.push(s);
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      for (int w : adj[u]) {
        if (dist[s][w] < 0) {
          dist[s][w] = dist[s][u] + 1;
          q.push(w);
        }
      }
    }
  }
}

CanonicalTree RootedView::Subtree(int v) const {
  return TreeFromCode(subtree_code[v], true);
}

bool RootedView::IsAncestor(int a, int v) const {
  while (v >= 0 && depth[v] > depth[a]) v = parent[v];
  return v == a;
}

std::vector<int> MajorSubtree(const CanonicalTree& t, int threshold) {
  const RootedView view(t);
  std::vector<int> out;
  for (int v = 0; v < t.size; ++v) {
    if (view.des_size[v] >= threshold) out.push_back(v);
  }
  return out;
}

std::vector<ArmPath> ArmPaths(const CanonicalTree& t) {
  const RootedView view(t);
  const int n = t.size;
  // chain[v]: Des(v) is a path hanging down from v.
  std::vector<char> chain(n, 0);
  for (int v = n - 1; v >= 0; --v) {
    const auto& kids = view.children[v];
    chain[v] = kids.empty() || (kids.size() == 1 && chain[kids[0]]);
  }
  std::vector<ArmPath> out;
  for (int v = 1; v < n; ++v) {
    const int p = view.parent[v];
    if (chain[v] && (p == 0 || !chain[p])) {
      out.push_back({v, view.des_size[v] - 1});
    }
  }
  return out;
}

namespace {

// Leaves are vertices of degree one in the tree viewed as a graph.
std::vector<int> NonLeafSites(const CanonicalTree& t) {
  const auto kids = t.Children();
  std::vector<int> sites;
  for (int v = 0; v < t.size; ++v) {
    const int degree =
        static_cast<int>(kids[v].size()) + (t.parent[v] >= 0 ? 1 : 0);
    if (degree != 1) sites.push_back(v);
  }
  return sites;
}

}  // namespace

const SimilarityOracle::Closure& SimilarityOracle::ClosureOf(
    const CanonicalTree& t) {
  auto it = cache_.find(t.code);
  if (it != cache_.end()) return it->second;

  const int max_k = static_cast<int>(std::floor(cfg_.sim_k_frac * t.size));
  const std::vector<int> sites = NonLeafSites(t);
  // Attachment options as (site, length), ordered so that multisets are
  // generated once each.
  std::vector<std::pair<int, int>> options;
  for (int s : sites) {
    for (int len = 1; len <= cfg_.sim_len; ++len) options.push_back({s, len});
  }

  Closure closure;
  TreeAdjacency adj = t.Adjacency();
  auto record = [&] {
    if (++nodes_ > cfg_.similarity_budget) {
      throw Error(ErrorKind::kSearchBudgetExceeded,
                  "similarity search exceeded its node budget");
    }
    closure[static_cast<int>(adj.size())].insert(RootedCode(adj, 0));
  };
  std::function<void(size_t, int)> extend = [&](size_t first, int left) {
    record();
    if (left == 0) return;
    for (size_t o = first; o < options.size(); ++o) {
      const auto [site, len] = options[o];
      int at = site;
      for (int i = 0; i < len; ++i) {
        const int fresh = static_cast<int>(adj.size());
        adj.push_back({at});
        adj[at].push_back(fresh);
        at = fresh;
      }
      extend(o, left - 1);
      // Peel the arm back off, newest vertex first.
      for (int i = 0; i < len; ++i) {
        const int last = static_cast<int>(adj.size()) - 1;
        const int up = adj[last][0];
        adj[up].pop_back();
        adj.pop_back();
      }
    }
  };
  extend(0, max_k);
  return cache_.emplace(t.code, std::move(closure)).first->second;
}

bool SimilarityOracle::Similar(const CanonicalTree& a,
                               const CanonicalTree& b) {
  if (a.code == b.code) return true;
  const Closure& ca = ClosureOf(a);
  const Closure& cb = ClosureOf(b);
  for (const auto& [size, codes] : ca) {
    auto other = cb.find(size);
    if (other == cb.end()) continue;
    for (const auto& c : codes) {
      if (other->second.count(c)) return true;
    }
  }
  return false;
}

bool Similar(const CanonicalTree& a, const CanonicalTree& b,
             const FamilyConfig& cfg) {
  SimilarityOracle oracle(cfg);
  return oracle.Similar(a, b);
}

AdmissibilityReport CheckAdmissible(const CanonicalTree& t,
                                    const FamilyConfig& cfg) {
  SimilarityOracle oracle(cfg);
  return CheckAdmissible(t, cfg, oracle);
}

AdmissibilityReport CheckAdmissible(const CanonicalTree& t,
                                    const FamilyConfig& cfg,
                                    SimilarityOracle& oracle) {
  if (t.size != cfg.aleph) {
    throw Error(ErrorKind::kInvalidArgument,
                "tree size differs from the configured aleph");
  }
  const RootedView view(t);
  const int n = t.size;
  AdmissibilityReport report;

  bool degree_ok = true;
  for (int v = 0; v < n; ++v) {
    const int degree = static_cast<int>(view.children[v].size()) +
                       (view.parent[v] >= 0 ? 1 : 0);
    if (degree > cfg.max_degree) degree_ok = false;
  }
  report.item[0] = degree_ok;

  bool arm_ok = true;
  for (const auto& arm : ArmPaths(t)) {
    if (arm.length >= cfg.max_armpath) arm_ok = false;
  }
  report.item[1] = arm_ok;

  const int major = static_cast<int>(MajorSubtree(t, cfg.tiota_threshold).size());
  report.item[2] = major >= cfg.tiota_min_frac * cfg.aleph - 1e-12;

  // The remaining items short-circuit once a violation is found, so the
  // similarity search only runs where it can change the answer.
  bool siblings_ok = true;
  for (int v = 0; v < n && siblings_ok; ++v) {
    const auto& kids = view.children[v];
    for (size_t i = 0; i < kids.size() && siblings_ok; ++i) {
      if (view.des_size[kids[i]] < cfg.tiota_threshold) continue;
      for (size_t j = i + 1; j < kids.size() && siblings_ok; ++j) {
        if (view.des_size[kids[j]] < cfg.tiota_threshold) continue;
        if (oracle.Similar(view.Subtree(kids[i]), view.Subtree(kids[j]))) {
          siblings_ok = false;
        }
      }
    }
  }
  report.item[3] = siblings_ok;

  bool root_ok = false;
  const auto& top = view.children[0];
  if (top.size() == 2) {
    int small = top[0], large = top[1];
    if (view.des_size[small] > view.des_size[large]) std::swap(small, large);
    if (view.des_size[small] == (n - 1) / 2 &&
        view.des_size[large] == n - 1 - (n - 1) / 2) {
      root_ok = true;
      const CanonicalTree t1 = view.Subtree(small);
      const CanonicalTree t2 = view.Subtree(large);
      for (int v = 0; v < n && root_ok; ++v) {
        if (view.IsAncestor(large, v) && oracle.Similar(t1, view.Subtree(v))) {
          root_ok = false;
        }
        if (view.IsAncestor(small, v) && oracle.Similar(t2, view.Subtree(v))) {
          root_ok = false;
        }
      }
    }
  }
  report.item[4] = root_ok;

  report.admissible = std::all_of(report.item.begin(), report.item.end(),
                                  [](bool b) { return b; });
  return report;
}

}  // namespace dtstat
