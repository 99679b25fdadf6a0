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
#include <map>

#include "dtstat/color_coding.h"
#include "dtstat/errors.h"
#include "dtstat/rng.h"

namespace dtstat {

void EstimatorConfig::Validate() const {
  if (t < 1) throw Error(ErrorKind::kInvalidConfig, "estimator.t must be >= 1");
}

StatisticReport FBar(const SimpleGraph& a, const SimpleGraph& b,
                     const Family& family, const VertexSet& j_a,
                     const VertexSet& j_b, const ModelParams& p,
                     const EstimatorConfig& cfg) {
  cfg.Validate();
  if (a.n() != p.n || b.n() != p.n || j_a.n() != p.n || j_b.n() != p.n) {
    throw Error(ErrorKind::kInvalidArgument,
                "graphs and J sets must live on [n]");
  }
  StatisticReport report;
  report.mode = PathMode::kNb;
  report.family_hash = FamilyHash(family);
  if (family.shapes.empty()) return report;

  int colors = 0;
  for (const auto& s : family.shapes) colors = std::max(colors, s.tree.size);
  // Plainly centred entries; the standardising denominator is restored per
  // shape as d^-(edges).
  const WeightedGraph ma = Standardize(a, p, /*plain_centering=*/true);
  const WeightedGraph mb = Standardize(b, p, /*plain_centering=*/true);
  const double log_d = std::log(p.d());

  auto colorings = [&](int side) {
    std::vector<VertexColoring> out;
    out.reserve(cfg.t);
    for (int i = 0; i < cfg.t; ++i) {
      Rng rng = MakeRng(DeriveSeed(cfg.seed, side, i));
      out.push_back(VertexColoring::Uniform(p.n, colors, rng));
    }
    return out;
  };
  const auto mu = colorings(0);
  const auto nu = colorings(1);

  std::map<int, NbTable> tables_a, tables_b;
  for (const auto& s : family.shapes) {
    if (!tables_a.count(s.path_len)) {
      tables_a.emplace(s.path_len, NbTable(ma, j_a, s.path_len));
      tables_b.emplace(s.path_len, NbTable(mb, j_b, s.path_len));
    }
  }

  const DpOptions options{.memo = cfg.memo};
  const auto ids = PairingIds(family);
  std::vector<double> terms;
  for (size_t i = 0; i < family.shapes.size(); ++i) {
    const auto& shape = family.shapes[i];
    const double scale = std::exp(-shape.num_edges() * log_d) /
                         ColorfulProbability(shape.tree.size, colors);
    auto average = [&](const WeightedGraph& m, const VertexSet& j,
                       const NbTable& table,
                       const std::vector<VertexColoring>& cs) {
      std::vector<double> xs;
      xs.reserve(cs.size());
      for (const auto& c : cs) xs.push_back(XhDp(m, c, shape, j, table, options) * scale);
      return PairwiseSum(xs) / static_cast<double>(xs.size());
    };
    ShapeTerm t;
    t.tree_code = shape.tree.code;
    t.pairing_id = ids[i];
    t.weight = std::exp(ShapeLogWeight(shape, p));
    t.sum_a = average(ma, j_a, tables_a.at(shape.path_len), mu);
    t.sum_b = average(mb, j_b, tables_b.at(shape.path_len), nu);
    terms.push_back(t.weight * t.sum_a * t.sum_b);
    report.per_shape.push_back(std::move(t));
  }
  report.value = PairwiseSum(terms);
  return report;
}

}  // namespace dtstat
