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

// Colour-set dynamic programme over the shape's tree. Each subtree keeps,
// per colour set, a vector over host images of its root; a subtree holding
// exactly one end of a pair whose partner lies outside keeps instead a matrix
// whose rows are images of its root and whose columns are the image of that
// end, expressed in the table's basis. The pair closes against the table's
// kernel as soon as both ends are inside.

#include <algorithm>
#include <cassert>
#include <map>
#include <string>

#include <Eigen/Sparse>
#include <boost/multiprecision/cpp_int.hpp>

#include "dtstat/color_coding.h"
#include "dtstat/errors.h"
#include "dtstat/tree_code.h"

namespace dtstat {
namespace {

using ColorSet = uint32_t;

struct DpState {
  int open_pair = -1;
  std::map<ColorSet, Eigen::VectorXd> vec;  // used when open_pair < 0
  std::map<ColorSet, Eigen::MatrixXd> mat;  // used otherwise
};

// Applies M = support + background * (all-ones - identity).
class HostOperator {
 public:
  explicit HostOperator(const WeightedGraph& m) : n_(m.n()), c_(m.background()) {
    std::vector<Eigen::Triplet<double>> entries;
    for (const Edge& e : m.support().Edges()) {
      entries.emplace_back(e.u, e.v, e.w - c_);
      entries.emplace_back(e.v, e.u, e.w - c_);
    }
    delta_.resize(n_, n_);
    delta_.setFromTriplets(entries.begin(), entries.end());
  }

  Eigen::VectorXd Apply(const Eigen::VectorXd& x) const {
    Eigen::VectorXd y = delta_ * x;
    if (c_ != 0.0) y.array() += c_ * (x.sum() - x.array());
    return y;
  }

  Eigen::MatrixXd Apply(const Eigen::MatrixXd& x) const {
    Eigen::MatrixXd y = delta_ * x;
    if (c_ != 0.0) {
      y.rowwise() += c_ * x.colwise().sum();
      y -= c_ * x;
    }
    return y;
  }

 private:
  int n_;
  double c_;
  Eigen::SparseMatrix<double, Eigen::RowMajor> delta_;
};

class XhProgram {
 public:
  XhProgram(const WeightedGraph& m, const VertexColoring& mu,
            const DecoratedTreeShape& shape, const VertexSet& j,
            const NbTable& table, DpOptions options)
      : host_(m), table_(table), options_(options), n_(m.n()),
        colors_(mu.num_colors), k_(shape.tree.size) {
    if (mu.n() != n_ || j.n() != n_) {
      throw Error(ErrorKind::kInvalidArgument,
                  "colouring and J must live on the host's [n]");
    }
    if (colors_ > 20) {
      throw Error(ErrorKind::kInvalidArgument, "too many colours");
    }
    if (table.n() != n_ || table.len() != shape.path_len) {
      throw Error(ErrorKind::kInvalidArgument,
                  "NB table does not match the shape and host");
    }
    by_color_.assign(colors_, Eigen::VectorXd::Zero(n_));
    for (Vertex x = 0; x < n_; ++x) {
      if (!j.Contains(x)) by_color_[mu.colors[x]][x] = 1.0;
    }
    const auto adj = shape.tree.Adjacency();
    partner_.assign(k_, -1);
    pair_of_.assign(k_, -1);
    for (size_t i = 0; i < shape.pairing.pairs.size(); ++i) {
      const auto [a, b] = shape.pairing.pairs[i];
      partner_[a] = b;
      partner_[b] = a;
      pair_of_[a] = pair_of_[b] = static_cast<int>(i);
    }
    root_ = shape.pairing.pairs.empty() ? 0 : shape.pairing.pairs[0].first;
    children_.assign(k_, {});
    code_.assign(k_, "");
    has_pair_.assign(k_, false);
    Orient(adj, root_, -1);
  }

  double Run() {
    if (k_ > n_ || k_ > colors_) return 0.0;
    const DpState top = Solve(root_);
    if (top.open_pair >= 0) {
      throw Error(ErrorKind::kShapeUnsupported, "pair left open at the root");
    }
    double total = 0.0;
    for (const auto& [set, v] : top.vec) total += v.sum();
    return total;
  }

 private:
  void Orient(const std::vector<std::vector<int>>& adj, int v, int from) {
    std::vector<std::string> child_codes;
    has_pair_[v] = partner_[v] >= 0;
    for (int u : adj[v]) {
      if (u == from) continue;
      Orient(adj, u, v);
      children_[v].push_back(u);
      has_pair_[v] = has_pair_[v] || has_pair_[u];
    }
    // Canonical child order, so isomorphic subtrees repeat the same
    // floating-point operations.
    std::sort(children_[v].begin(), children_[v].end(), [&](int a, int b) {
      return std::tie(code_[a], a) < std::tie(code_[b], b);
    });
    std::string code = "(";
    for (int u : children_[v]) code += code_[u];
    code_[v] = code + ")";
  }

  DpState Solve(int v) {
    if (options_.memo && !has_pair_[v]) {
      auto it = memo_.find(code_[v]);
      if (it != memo_.end()) return it->second;
    }
    DpState acc;
    for (int c = 0; c < colors_; ++c) acc.vec[ColorSet{1} << c] = by_color_[c];
    // Closed branches first; then branches that close a pair between
    // themselves; then the branch holding v's partner, which closes at v;
    // at most one open branch may remain.
    std::vector<DpState> open;
    for (int u : children_[v]) {
      DpState msg = Message(Solve(u));
      if (msg.open_pair < 0) {
        Merge(acc, msg);
      } else {
        open.push_back(std::move(msg));
      }
    }
    std::vector<char> used(open.size(), 0);
    for (size_t a = 0; a < open.size(); ++a) {
      for (size_t b = a + 1; b < open.size() && !used[a]; ++b) {
        if (!used[b] && open[a].open_pair == open[b].open_pair) {
          Merge(open[a], open[b]);
          Merge(acc, open[a]);
          used[a] = used[b] = 1;
        }
      }
    }
    for (size_t a = 0; a < open.size(); ++a) {
      if (!used[a] && open[a].open_pair == pair_of_[v]) {
        Merge(acc, open[a]);
        Close(acc);
        used[a] = 1;
      }
    }
    for (size_t a = 0; a < open.size(); ++a) {
      if (!used[a]) Merge(acc, open[a]);  // throws on a second open pair
    }
    if (pair_of_[v] >= 0 && !IsInside(partner_[v], v)) {
      // v's partner lies outside this subtree, so v's own pair opens here.
      if (acc.open_pair >= 0) Unsupported();
      acc.open_pair = pair_of_[v];
      for (const auto& [set, vec] : acc.vec) {
        acc.mat[set] = vec.asDiagonal() * table_.basis();
      }
      acc.vec.clear();
    }
    if (options_.memo && !has_pair_[v]) memo_[code_[v]] = acc;
    return acc;
  }

  bool IsInside(int w, int v) const {
    if (w == v) return true;
    for (int u : children_[v]) {
      if (IsInside(w, u)) return true;
    }
    return false;
  }

  [[noreturn]] static void Unsupported() {
    throw Error(ErrorKind::kShapeUnsupported,
                "a subtree would hold single ends of two different pairs");
  }

  DpState Message(const DpState& child) const {
    DpState out;
    out.open_pair = child.open_pair;
    for (const auto& [set, v] : child.vec) out.vec[set] = host_.Apply(v);
    for (const auto& [set, x] : child.mat) out.mat[set] = host_.Apply(x);
    return out;
  }

  // The two colour sets must partition the merged one.
  template <typename Map, typename Value>
  static void AddTo(Map& map, ColorSet set, Value&& value) {
    auto it = map.find(set);
    if (it == map.end()) {
      map.emplace(set, std::forward<Value>(value));
    } else {
      it->second += value;
    }
  }

  static ColorSet Join(ColorSet a, ColorSet b) {
    const ColorSet joined = a | b;
    assert((a & b) == 0 && (joined & ~a) == b && (joined & ~b) == a);
    return joined;
  }

  void Merge(DpState& acc, const DpState& msg) const {
    DpState out;
    const bool acc_open = acc.open_pair >= 0, msg_open = msg.open_pair >= 0;
    if (acc_open && msg_open && acc.open_pair != msg.open_pair) Unsupported();
    out.open_pair = acc_open != msg_open ? std::max(acc.open_pair, msg.open_pair)
                                         : -1;
    auto disjoint = [](ColorSet a, ColorSet b) { return (a & b) == 0; };
    if (!acc_open && !msg_open) {
      for (const auto& [sa, va] : acc.vec) {
        for (const auto& [sb, vb] : msg.vec) {
          if (disjoint(sa, sb)) AddTo(out.vec, Join(sa, sb), va.cwiseProduct(vb));
        }
      }
    } else if (!acc_open) {
      for (const auto& [sa, va] : acc.vec) {
        for (const auto& [sb, xb] : msg.mat) {
          if (disjoint(sa, sb)) {
            AddTo(out.mat, Join(sa, sb), Eigen::MatrixXd(va.asDiagonal() * xb));
          }
        }
      }
    } else if (!msg_open) {
      for (const auto& [sa, xa] : acc.mat) {
        for (const auto& [sb, vb] : msg.vec) {
          if (disjoint(sa, sb)) {
            AddTo(out.mat, Join(sa, sb), Eigen::MatrixXd(vb.asDiagonal() * xa));
          }
        }
      }
    } else {
      // Both ends below v in different branches: join through the kernel.
      for (const auto& [sa, xa] : acc.mat) {
        const Eigen::MatrixXd through = xa * table_.kernel();
        for (const auto& [sb, xb] : msg.mat) {
          if (disjoint(sa, sb)) {
            AddTo(out.vec, Join(sa, sb),
                  Eigen::VectorXd(through.cwiseProduct(xb).rowwise().sum()));
          }
        }
      }
    }
    acc = std::move(out);
  }

  // v itself closes the open pair: weight by L(image of v, image of end).
  void Close(DpState& acc) const {
    const Eigen::MatrixXd rows = table_.basis() * table_.kernel();
    for (const auto& [set, x] : acc.mat) {
      acc.vec[set] = x.cwiseProduct(rows).rowwise().sum();
    }
    acc.mat.clear();
    acc.open_pair = -1;
  }

  const HostOperator host_;
  const NbTable& table_;
  const DpOptions options_;
  const int n_;
  const int colors_;
  const int k_;
  int root_ = 0;
  std::vector<Eigen::VectorXd> by_color_;
  std::vector<int> partner_, pair_of_;
  std::vector<std::vector<int>> children_;
  std::vector<std::string> code_;
  std::vector<bool> has_pair_;
  std::map<std::string, DpState> memo_;
};

}  // namespace

double XhDp(const WeightedGraph& m, const VertexColoring& mu,
            const DecoratedTreeShape& shape, const VertexSet& j,
            const NbTable& table, DpOptions options) {
  if (shape.path_len < 2) {
    throw Error(ErrorKind::kInvalidLength, "path length < 2");
  }
  XhProgram program(m, mu, shape, j, table, options);
  const double total = program.Run();
  // The programme counts labelled maps; each embedding arises once per
  // automorphism of the tree that preserves the pairs.
  return total / static_cast<double>(PairingAutomorphisms(shape).size());
}

double XhDp(const WeightedGraph& m, const VertexColoring& mu,
            const DecoratedTreeShape& shape, const VertexSet& j) {
  return XhDp(m, mu, shape, j, NbTable(m, j, shape.path_len));
}

double XhBruteforce(const WeightedGraph& m, const VertexColoring& mu,
                    const DecoratedTreeShape& shape, const VertexSet& j,
                    uint64_t budget) {
  return EmbeddingSum(m, shape, j, PathMode::kNb, &mu, budget);
}

double ColorfulProbability(int k, int num_colors) {
  using boost::multiprecision::cpp_int;
  using boost::multiprecision::cpp_rational;
  if (k < 0 || num_colors < 1) {
    throw Error(ErrorKind::kInvalidArgument, "bad colour counts");
  }
  if (k > num_colors) return 0.0;
  cpp_int falling = 1, power = 1;
  for (int i = 0; i < k; ++i) {
    falling *= num_colors - i;
    power *= num_colors;
  }
  return static_cast<double>(cpp_rational(falling, power));
}

int DefaultColorings(int aleph) {
  using boost::multiprecision::cpp_int;
  cpp_int fact = 1, power = 1;
  for (int i = 1; i <= aleph; ++i) {
    fact *= i;
    power *= aleph;
  }
  return static_cast<int>((power + fact - 1) / fact);
}

}  // namespace dtstat
