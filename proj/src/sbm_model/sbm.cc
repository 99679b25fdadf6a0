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

#include "dtstat/sbm.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "dtstat/errors.h"

namespace dtstat {
namespace {

// Calls fn(k) for each k in [0, total) independently with probability p,
// jumping between successes with geometric gaps.
template <typename Fn>
void ForEachSuccess(uint64_t total, double p, Rng& rng, Fn&& fn) {
  if (total == 0 || p <= 0.0) return;
  if (p >= 1.0) {
    for (uint64_t k = 0; k < total; ++k) fn(k);
    return;
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double log_fail = std::log1p(-p);
  uint64_t k = 0;
  while (true) {
    const double u = 1.0 - unit(rng);  // in (0, 1]
    const double gap = std::floor(std::log(u) / log_fail);
    if (gap >= static_cast<double>(total - k)) return;
    k += static_cast<uint64_t>(gap);
    fn(k);
    if (++k >= total) return;
  }
}

// Position of linear index k in the strict lower triangle, rows first.
std::pair<uint64_t, uint64_t> TriangleCell(uint64_t k) {
  uint64_t row = static_cast<uint64_t>(
      (1.0 + std::sqrt(1.0 + 8.0 * static_cast<double>(k))) / 2.0);
  while (row * (row - 1) / 2 > k) --row;
  while ((row + 1) * row / 2 <= k) ++row;
  return {row, k - row * (row - 1) / 2};
}

Labels UniformLabels(int n, Rng& rng) {
  std::bernoulli_distribution coin(0.5);
  Labels sigma(n);
  for (auto& s : sigma) s = coin(rng) ? 1 : -1;
  return sigma;
}

void CheckRates(double lambda, double eps, int n) {
  if ((1.0 + eps) * lambda / n > 1.0) {
    throw Error(ErrorKind::kRateOutOfRange,
                "(1+eps)*lambda/n exceeds 1 at n=" + std::to_string(n));
  }
}

}  // namespace

double ModelParams::d() const {
  const double qq = q();
  return std::sqrt(qq * (1.0 - qq));
}

int ModelParams::j_size() const {
  return static_cast<int>(std::floor(j_frac * n + 1e-9));
}

void ModelParams::Validate() const {
  auto fail = [](const std::string& what) {
    throw Error(ErrorKind::kInvalidConfig, what);
  };
  if (n < 1) fail("n must be positive");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) fail("lambda must be >= 0");
  if (!(eps >= 0.0 && eps < 1.0)) fail("eps must lie in [0,1)");
  if (!(s >= 0.0 && s <= 1.0)) fail("s must lie in [0,1]");
  if (!(j_frac >= 0.0 && j_frac <= 1.0)) fail("j_frac must lie in [0,1]");
  if (!(q() < 1.0)) fail("lambda*s/n must be below 1");
  CheckRates(lambda, eps, n);
}

nlohmann::json ParamsToJson(const ModelParams& p) {
  return {{"n", p.n},           {"lambda", p.lambda}, {"eps", p.eps},
          {"s", p.s},           {"j_frac", p.j_frac}};
}

ModelParams ParamsFromJson(const nlohmann::json& j) {
  ModelParams p;
  try {
    p.n = j.value("n", p.n);
    p.lambda = j.value("lambda", p.lambda);
    p.eps = j.value("eps", p.eps);
    p.s = j.value("s", p.s);
    p.j_frac = j.value("j_frac", p.j_frac);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParseError, e.what());
  }
  return p;
}

SimpleGraph SampleSbmGivenLabels(const Labels& sigma, double lambda,
                                 double eps, Rng& rng) {
  const int n = static_cast<int>(sigma.size());
  CheckRates(lambda, eps, n);
  const double p_in = (1.0 + eps) * lambda / n;
  const double p_out = (1.0 - eps) * lambda / n;
  std::vector<Vertex> plus, minus;
  for (int i = 0; i < n; ++i) (sigma[i] > 0 ? plus : minus).push_back(i);

  SimpleGraph g(n);
  for (const auto* block : {&plus, &minus}) {
    const uint64_t m = block->size();
    ForEachSuccess(m * (m - 1) / 2, p_in, rng, [&](uint64_t k) {
      const auto [row, col] = TriangleCell(k);
      g.AddEdge((*block)[row], (*block)[col]);
    });
  }
  const uint64_t cols = minus.size();
  ForEachSuccess(plus.size() * cols, p_out, rng, [&](uint64_t k) {
    g.AddEdge(plus[k / cols], minus[k % cols]);
  });
  return g;
}

SbmSample SampleSbm(int n, double lambda, double eps, uint64_t seed) {
  CheckRates(lambda, eps, n);
  Rng rng = MakeRng(seed);
  SbmSample out;
  out.sigma = UniformLabels(n, rng);
  out.graph = SampleSbmGivenLabels(out.sigma, lambda, eps, rng);
  return out;
}

CorrelatedSample SampleCorrelated(const ModelParams& p, uint64_t seed) {
  p.Validate();
  CorrelatedSample out;
  SbmSample parent = SampleSbm(p.n, p.lambda, p.eps, DeriveSeed(seed, 0));
  out.sigma = std::move(parent.sigma);
  out.parent = std::move(parent.graph);

  Rng perm_rng = MakeRng(DeriveSeed(seed, 1));
  out.pi.resize(p.n);
  for (int i = 0; i < p.n; ++i) out.pi[i] = i;
  std::shuffle(out.pi.begin(), out.pi.end(), perm_rng);

  Rng keep_rng = MakeRng(DeriveSeed(seed, 2));
  std::bernoulli_distribution keep(p.s);
  out.a = SimpleGraph(p.n);
  out.b = SimpleGraph(p.n);
  for (const Edge& e : out.parent.Edges()) {
    if (keep(keep_rng)) out.a.AddEdge(e.u, e.v);
    if (keep(keep_rng)) out.b.AddEdge(out.pi[e.u], out.pi[e.v]);
  }
  return out;
}

NullSample SampleNull(const ModelParams& p, uint64_t seed) {
  p.Validate();
  NullSample out;
  SbmSample a = SampleSbm(p.n, p.lambda * p.s, p.eps, DeriveSeed(seed, 0));
  SbmSample b = SampleSbm(p.n, p.lambda * p.s, p.eps, DeriveSeed(seed, 1));
  out.a = std::move(a.graph);
  out.b = std::move(b.graph);
  out.sigma_a = std::move(a.sigma);
  out.sigma_b = std::move(b.sigma);
  return out;
}

VertexSet SampleJ(const ModelParams& p, Rng& rng) {
  return VertexSet(p.n, SampleWithoutReplacement(p.n, p.j_size(), rng));
}

WeightedGraph Standardize(const SimpleGraph& g, const ModelParams& p,
                          bool plain_centering) {
  const double q = p.q();
  const double scale = plain_centering ? 1.0 : p.d();
  if (!(scale > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument,
                "standardisation needs 0 < lambda*s/n < 1");
  }
  SimpleGraph support(g.n());
  for (const Edge& e : g.Edges()) support.AddEdge(e.u, e.v, (1.0 - q) / scale);
  return WeightedGraph(std::move(support), -q / scale);
}

}  // namespace dtstat
