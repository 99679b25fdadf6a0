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

// Two-community stochastic block models, correlated pairs, the null pair,
// standardisation and exact per-edge moments.

#ifndef DTSTAT_SBM_H_
#define DTSTAT_SBM_H_

#include <array>
#include <cstdint>
#include <vector>

#include "dtstat/graph.h"
#include "dtstat/rng.h"
#include "json.hpp"

namespace dtstat {

struct ModelParams {
  int n = 1000;
  double lambda = 10.0;
  double eps = 0.5;
  double s = 0.9;
  double j_frac = 0.1;

  // Edge density of each observed graph.
  double q() const { return lambda * s / n; }
  // Standard deviation of an observed edge indicator.
  double d() const;
  int j_size() const;

  // Throws kInvalidConfig, or kRateOutOfRange when (1+eps)lambda/n > 1.
  void Validate() const;
};

nlohmann::json ParamsToJson(const ModelParams& p);
ModelParams ParamsFromJson(const nlohmann::json& j);

using Labels = std::vector<int8_t>;  // entries are -1 or +1

struct SbmSample {
  Labels sigma;
  SimpleGraph graph;
};

struct CorrelatedSample {
  Labels sigma;
  std::vector<Vertex> pi;  // vertex i of the parent is vertex pi[i] of B
  SimpleGraph parent;
  SimpleGraph a;
  SimpleGraph b;
};

struct NullSample {
  SimpleGraph a;
  SimpleGraph b;
  Labels sigma_a;
  Labels sigma_b;
};

// Same-label pairs are edges with probability (1+eps)lambda/n, others with
// (1-eps)lambda/n. Throws kRateOutOfRange when a probability exceeds 1.
SbmSample SampleSbm(int n, double lambda, double eps, uint64_t seed);
// Same with fixed labels.
SimpleGraph SampleSbmGivenLabels(const Labels& sigma, double lambda,
                                 double eps, Rng& rng);

CorrelatedSample SampleCorrelated(const ModelParams& p, uint64_t seed);
NullSample SampleNull(const ModelParams& p, uint64_t seed);

// Uniform subset of size p.j_size().
VertexSet SampleJ(const ModelParams& p, Rng& rng);

// Present edges carry (1-q)/d and absent pairs -q/d. With `plain_centering`
// the division by d is skipped.
WeightedGraph Standardize(const SimpleGraph& g, const ModelParams& p,
                          bool plain_centering = false);

// E[X^r Y^t | sigma_i sigma_j = g] = u + v g for the standardised entries X of
// A and Y of B on one vertex pair. `correlated` selects the joint law of the
// correlated pair; otherwise A and B are independent given g.
struct EdgeMoment {
  double u = 0.0;
  double v = 0.0;
  int r = 0;
  int t = 0;
};

EdgeMoment ExactEdgeMoments(int r, int t, const ModelParams& p,
                            bool correlated);

// Joint law of (A_e, B_e) given g: probabilities of (1,1), (1,0), (0,1),
// (0,0).
std::array<double, 4> EdgeJointLaw(const ModelParams& p, int g,
                                   bool correlated);

}  // namespace dtstat

#endif  // DTSTAT_SBM_H_
