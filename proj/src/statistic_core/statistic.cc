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

#include <cmath>
#include <map>

#include "dtstat/errors.h"
#include "dtstat/statistic.h"

namespace dtstat {

double ShapeLogWeight(const DecoratedTreeShape& shape, const ModelParams& p) {
  const int aleph = shape.tree.size;
  const int path_edges =
      shape.path_len * static_cast<int>(shape.pairing.pairs.size());
  const uint64_t aut = CanonicalCode(shape.tree.Adjacency()).aut;
  const double signal = p.eps * p.eps * p.lambda * p.s;
  return (aleph - 1) * std::log(p.s) + std::log(static_cast<double>(aut)) +
         path_edges * std::log(signal) -
         (aleph + path_edges) * std::log(static_cast<double>(p.n));
}

std::vector<int> PairingIds(const Family& family) {
  std::map<std::string, int> seen;
  std::vector<int> ids;
  for (const auto& s : family.shapes) ids.push_back(seen[s.tree.code]++);
  return ids;
}

nlohmann::json ReportToJson(const StatisticReport& r) {
  nlohmann::json shapes = nlohmann::json::array();
  for (const auto& t : r.per_shape) {
    shapes.push_back({{"tree_code", t.tree_code},
                      {"pairing_id", t.pairing_id},
                      {"sumA", t.sum_a},
                      {"sumB", t.sum_b},
                      {"weight", t.weight}});
  }
  return {{"mode", PathModeName(r.mode)},
          {"family_hash", r.family_hash},
          {"value", r.value},
          {"per_shape", shapes}};
}

StatisticReport FExact(const SimpleGraph& a, const SimpleGraph& b,
                       const Family& family, const VertexSet& j_a,
                       const VertexSet& j_b, const ModelParams& p,
                       PathMode mode, uint64_t budget) {
  if (a.n() != p.n || b.n() != p.n || j_a.n() != p.n || j_b.n() != p.n) {
    throw Error(ErrorKind::kInvalidArgument,
                "graphs and J sets must live on [n]");
  }
  StatisticReport report;
  report.mode = mode;
  report.family_hash = FamilyHash(family);
  const WeightedGraph ma = Standardize(a, p);
  const WeightedGraph mb = Standardize(b, p);
  const auto ids = PairingIds(family);
  std::vector<double> terms;
  for (size_t i = 0; i < family.shapes.size(); ++i) {
    const auto& shape = family.shapes[i];
    ShapeTerm t;
    t.tree_code = shape.tree.code;
    t.pairing_id = ids[i];
    t.weight = std::exp(ShapeLogWeight(shape, p));
    t.sum_a = EmbeddingSum(ma, shape, j_a, mode, nullptr, budget);
    t.sum_b = EmbeddingSum(mb, shape, j_b, mode, nullptr, budget);
    terms.push_back(t.weight * t.sum_a * t.sum_b);
    report.per_shape.push_back(std::move(t));
  }
  report.value = PairwiseSum(terms);
  return report;
}

}  // namespace dtstat
