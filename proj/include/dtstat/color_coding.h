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

// Colour-coding estimator of the non-backtracking statistic.

#ifndef DTSTAT_COLOR_CODING_H_
#define DTSTAT_COLOR_CODING_H_

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "dtstat/family.h"
#include "dtstat/graph.h"
#include "dtstat/sbm.h"
#include "dtstat/statistic.h"

namespace dtstat {

// Sums over non-backtracking walks of length `len` between every ordered
// pair, with the vertices next to both ends in J. Entries with an endpoint
// in J, and the diagonal, are zero.
class NbTable {
 public:
  NbTable() = default;
  NbTable(const WeightedGraph& m, const VertexSet& j, int len);

  int n() const { return static_cast<int>(table_.rows()); }
  int len() const { return len_; }
  double operator()(Vertex x, Vertex y) const { return table_(x, y); }
  const Eigen::MatrixXd& matrix() const { return table_; }

  // Off the diagonal, table = basis * kernel * basis^T. Up to length 4 the
  // basis is built from M restricted to columns in J (|J| or 3|J| columns);
  // beyond that it is the identity.
  const Eigen::MatrixXd& basis() const { return basis_; }
  const Eigen::MatrixXd& kernel() const { return kernel_; }

 private:
  Eigen::MatrixXd table_;
  Eigen::MatrixXd basis_;
  Eigen::MatrixXd kernel_;
  int len_ = 0;
};

struct DpOptions {
  // Reuse results for isomorphic pairing-free subtrees.
  bool memo = true;
};

// Sum over non-backtracking embeddings whose tree image is colourful under
// `mu` of the product of M over all edges; one term per embedding, as in
// EmbeddingSum. `table` must match the shape's path length and J. Throws
// kShapeUnsupported when a subtree would leave two different pairs open.
double XhDp(const WeightedGraph& m, const VertexColoring& mu,
            const DecoratedTreeShape& shape, const VertexSet& j,
            const NbTable& table, DpOptions options = {});

// Convenience overload that builds the table.
double XhDp(const WeightedGraph& m, const VertexColoring& mu,
            const DecoratedTreeShape& shape, const VertexSet& j);

// Direct sum over enumerated embeddings.
double XhBruteforce(const WeightedGraph& m, const VertexColoring& mu,
                    const DecoratedTreeShape& shape, const VertexSet& j,
                    uint64_t budget = kDefaultEmbeddingBudget);

// Probability that a uniform colouring with `num_colors` colours makes a
// fixed set of `k` vertices colourful: c! / ((c-k)! c^k), from exact
// integers.
double ColorfulProbability(int k, int num_colors);

// Colourings per graph that make the expected number of colourful draws of
// an aleph-set equal to one.
int DefaultColorings(int aleph);

struct EstimatorConfig {
  int t = 1;
  uint64_t seed = 0;
  bool memo = true;

  void Validate() const;
};

// Colourings of A use DeriveSeed(seed, 0, i); those of B DeriveSeed(seed, 1, i).
// Every shape sees the same colourings.
StatisticReport FBar(const SimpleGraph& a, const SimpleGraph& b,
                     const Family& family, const VertexSet& j_a,
                     const VertexSet& j_b, const ModelParams& p,
                     const EstimatorConfig& cfg);

}  // namespace dtstat

#endif  // DTSTAT_COLOR_CODING_H_
