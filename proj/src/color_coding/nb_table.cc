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

// Non-backtracking walk sums for all endpoint pairs at once.
//
// A walk w_0..w_len backtracks at i when w_{i+1} = w_{i-1}. By
// inclusion-exclusion over the set B of forced backtracks, the NB sum is
// sum_B (-1)^|B| W_B, where W_B sums plain walks obeying the equalities in B.
// Forcing w_{i+1} = w_{i-1} folds the walk onto itself, so the positions
// collapse into classes that form a tree; W_B is then a chain of
// entrywise powers of M along the class path from w_0 to w_len, with
// diagonal factors from any branches hanging off it.
//
// Lengths up to 4 are done in closed form instead: x, y lie outside J and
// their neighbours on the walk inside it, so lengths 2 and 3 cannot backtrack
// at all and length 4 has three ways to. These tables factor through the
// columns of M in J, which the DP exploits.

#include <map>
#include <numeric>
#include <stdexcept>
#include <utility>

#include "dtstat/color_coding.h"
#include "dtstat/errors.h"

namespace dtstat {
namespace {

Eigen::MatrixXd DenseWeights(const WeightedGraph& m) {
  const int n = m.n();
  Eigen::MatrixXd d = Eigen::MatrixXd::Constant(n, n, m.background());
  d.diagonal().setZero();
  for (const Edge& e : m.support().Edges()) {
    d(e.u, e.v) = e.w;
    d(e.v, e.u) = e.w;
  }
  return d;
}

class PowerCache {
 public:
  explicit PowerCache(const Eigen::MatrixXd& base) { powers_[1] = base; }

  const Eigen::MatrixXd& Get(int k) {
    auto it = powers_.find(k);
    if (it != powers_.end()) return it->second;
    Eigen::MatrixXd p = Get(k - 1).cwiseProduct(powers_[1]);
    return powers_.emplace(k, std::move(p)).first->second;
  }

 private:
  std::map<int, Eigen::MatrixXd> powers_;
};

// R * diag(w) * P, skipping the zero entries of w.
Eigen::MatrixXd ScaledProduct(const Eigen::MatrixXd& r, const Eigen::VectorXd& w,
                              const Eigen::MatrixXd& p) {
  std::vector<int> keep;
  for (int i = 0; i < w.size(); ++i) {
    if (w[i] != 0.0) keep.push_back(i);
  }
  if (keep.empty()) return Eigen::MatrixXd::Zero(r.rows(), p.cols());
  Eigen::VectorXd wk(keep.size());
  for (size_t i = 0; i < keep.size(); ++i) wk[i] = w[keep[i]];
  return r(Eigen::all, keep) * (wk.asDiagonal() * p(keep, Eigen::all));
}

}  // namespace

NbTable::NbTable(const WeightedGraph& m, const VertexSet& j, int len)
    : len_(len) {
  if (len < 2) throw Error(ErrorKind::kInvalidLength, "path length < 2");
  if (j.n() != m.n()) {
    throw Error(ErrorKind::kInvalidArgument, "J lives on a different [n]");
  }
  const int n = m.n();
  table_ = Eigen::MatrixXd::Zero(n, n);
  if (n == 0) {
    basis_ = kernel_ = Eigen::MatrixXd::Zero(0, 0);
    return;
  }
  const Eigen::MatrixXd dense = DenseWeights(m);
  if (len <= 4) {
    const std::vector<int> cols(j.members().begin(), j.members().end());
    const int r = static_cast<int>(cols.size());
    Eigen::MatrixXd a = dense(Eigen::all, cols);
    for (Vertex v : j.members()) a.row(v).setZero();
    if (len == 2) {
      basis_ = a;
      kernel_ = Eigen::MatrixXd::Identity(r, r);
    } else if (len == 3) {
      basis_ = a;
      kernel_ = dense(cols, cols);
    } else {
      // x j1 w j2 y: every middle w, less w = x, w = y and j1 = j2, plus the
      // two overlaps x j x j y and x j y j y.
      const Eigen::MatrixXd mj = dense(cols, Eigen::all);
      const Eigen::VectorXd row_sq = a.cwiseAbs2().rowwise().sum();
      const Eigen::VectorXd col_sq = mj.cwiseAbs2().rowwise().sum();
      basis_.resize(n, 3 * r);
      basis_ << a, row_sq.asDiagonal() * a, a.cwiseAbs2().cwiseProduct(a);
      const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(r, r);
      kernel_ = Eigen::MatrixXd::Zero(3 * r, 3 * r);
      kernel_.topLeftCorner(r, r) = mj * mj.transpose();
      kernel_.topLeftCorner(r, r).diagonal() -= col_sq;
      kernel_.block(0, r, r, r) = -id;
      kernel_.block(r, 0, r, r) = -id;
      kernel_.block(0, 2 * r, r, r) = id;
      kernel_.block(2 * r, 0, r, r) = id;
    }
    table_ = basis_ * kernel_ * basis_.transpose();
    table_.diagonal().setZero();
    return;
  }
  PowerCache power(dense);
  Eigen::VectorXd in_j(n), ones = Eigen::VectorXd::Ones(n);
  for (int v = 0; v < n; ++v) in_j[v] = j.Contains(v) ? 1.0 : 0.0;

  const int inner = len - 1;  // backtrack positions 1..len-1
  for (uint32_t b = 0; b < (1u << inner); ++b) {
    std::vector<int> cls(len + 1);
    std::iota(cls.begin(), cls.end(), 0);
    auto find = [&](int x) {
      while (cls[x] != x) x = cls[x] = cls[cls[x]];
      return x;
    };
    for (int i = 1; i < len; ++i) {
      if (b >> (i - 1) & 1) cls[find(i - 1)] = find(i + 1);
    }
    const int start = find(0), end = find(len);
    if (start == end) continue;  // only reaches the diagonal
    const int j_first = find(1), j_last = find(len - 1);
    if (j_first == start || j_first == end || j_last == start || j_last == end) {
      continue;  // an endpoint would have to lie in J
    }

    // Quotient tree: class adjacency with traversal counts.
    std::map<int, std::map<int, int>> adj;
    for (int i = 0; i < len; ++i) {
      const int a = find(i), c = find(i + 1);
      ++adj[a][c];
      ++adj[c][a];
    }
    auto mask = [&](int c) -> const Eigen::VectorXd& {
      return c == j_first || c == j_last ? in_j : ones;
    };
    // Path of classes from start to end.
    std::map<int, int> parent{{start, start}};
    std::vector<int> stack{start};
    while (!stack.empty()) {
      const int c = stack.back();
      stack.pop_back();
      for (const auto& [d, k] : adj[c]) {
        if (!parent.count(d)) {
          parent[d] = c;
          stack.push_back(d);
        }
      }
    }
    std::vector<int> path{end};
    while (path.back() != start) path.push_back(parent[path.back()]);
    std::reverse(path.begin(), path.end());
    std::map<int, char> on_path;
    for (int c : path) on_path[c] = 1;

    // Branch factor of class c hanging from `from`.
    auto branch = [&](auto&& self, int c, int from) -> Eigen::VectorXd {
      Eigen::VectorXd h = mask(c);
      for (const auto& [d, k] : adj[c]) {
        if (d == from) continue;
        h = h.cwiseProduct(power.Get(k) * self(self, d, c));
      }
      return h;
    };
    auto weight_on_path = [&](int c) {
      Eigen::VectorXd w = mask(c);
      for (const auto& [d, k] : adj[c]) {
        if (on_path.count(d)) continue;
        w = w.cwiseProduct(power.Get(k) * branch(branch, d, c));
      }
      return w;
    };

    Eigen::MatrixXd chain = weight_on_path(start).asDiagonal() *
                            power.Get(adj[path[0]][path[1]]);
    for (size_t i = 1; i + 1 < path.size(); ++i) {
      chain = ScaledProduct(chain, weight_on_path(path[i]),
                            power.Get(adj[path[i]][path[i + 1]]));
    }
    chain = chain * weight_on_path(end).asDiagonal();
    const int bits = __builtin_popcount(b);
    if (bits % 2) {
      table_ -= chain;
    } else {
      table_ += chain;
    }
  }
  table_.diagonal().setZero();
  for (Vertex v : j.members()) {
    table_.row(v).setZero();
    table_.col(v).setZero();
  }
  basis_ = Eigen::MatrixXd::Identity(n, n);
  kernel_ = table_;
}

}  // namespace dtstat
