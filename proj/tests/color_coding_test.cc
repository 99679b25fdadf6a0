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
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "dtstat/color_coding.h"
#include "dtstat/errors.h"
#include "dtstat/nb_paths.h"
#include "dtstat/rng.h"
#include "dtstat/sbm.h"
#include "dtstat/statistic.h"
#include "dtstat/tree_code.h"

namespace dtstat {
namespace {

DecoratedTreeShape RandomShape(int k, int num_pairs, int len, Rng& rng) {
  TreeAdjacency adj(k);
  for (int v = 1; v < k; ++v) {
    const int u = std::uniform_int_distribution<int>(0, v - 1)(rng);
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  DecoratedTreeShape shape;
  shape.tree = TreeFromCode(RootedCode(adj, 0), true);
  shape.path_len = len;
  std::vector<int> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  for (int i = 0; i < num_pairs && 2 * i + 1 < k; ++i) {
    shape.pairing.pairs.push_back(std::minmax(order[2 * i], order[2 * i + 1]));
  }
  std::sort(shape.pairing.pairs.begin(), shape.pairing.pairs.end());
  return shape;
}

WeightedGraph RandomHost(int n, double density, double background, Rng& rng) {
  SimpleGraph g(n);
  std::bernoulli_distribution coin(density);
  std::uniform_real_distribution<double> w(-2.0, 2.0);
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      if (coin(rng)) g.AddEdge(a, b, w(rng));
    }
  }
  return WeightedGraph(std::move(g), background);
}

VertexSet RandomJ(int n, int size, Rng& rng) {
  return VertexSet(n, SampleWithoutReplacement(n, size, rng));
}

double RelErr(double got, double want) {
  return std::fabs(got - want) / std::max(1.0, std::fabs(want));
}

// ---- NB table ----------------------------------------------------------

TEST(NbTableTest, MatchesPerPairSums) {
  Rng rng(3);
  int checked = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 8 + trial % 10;
    const int len = 2 + trial % 5;
    const auto m = RandomHost(n, 0.4, trial % 2 ? -0.3 : 0.0, rng);
    const auto j = RandomJ(n, 2 + trial % 4, rng);
    const NbTable table(m, j, len);
    const auto outside = j.Complement();
    for (int k = 0; k < 3; ++k) {
      const Vertex x = outside[rng() % outside.size()];
      const Vertex y = outside[rng() % outside.size()];
      if (x == y) continue;
      const double want = NbPathSum(m, x, y, len, j);
      EXPECT_LE(RelErr(table(x, y), want), 1e-9)
          << "len " << len << " x " << x << " y " << y;
      ++checked;
    }
  }
  EXPECT_GE(checked, 100);
}

TEST(NbTableTest, Symmetric) {
  Rng rng(4);
  for (int len = 2; len <= 6; ++len) {
    const auto m = RandomHost(12, 0.5, 0.2, rng);
    const auto j = RandomJ(12, 4, rng);
    const NbTable table(m, j, len);
    EXPECT_LE((table.matrix() - table.matrix().transpose()).cwiseAbs().maxCoeff(),
              1e-9 * std::max(1.0, table.matrix().cwiseAbs().maxCoeff()));
  }
}

TEST(NbTableTest, IsolatedVertexHasZeroRow) {
  Rng rng(5);
  SimpleGraph g(10);
  for (int a = 1; a < 10; ++a) {
    for (int b = a + 1; b < 10; ++b) g.AddEdge(a, b, 1.5);
  }
  const WeightedGraph m(std::move(g), 0.0);
  const VertexSet j(10, {4, 5, 6});
  for (int len = 2; len <= 5; ++len) {
    const NbTable table(m, j, len);
    EXPECT_EQ(table.matrix().row(0).cwiseAbs().sum(), 0.0);
  }
}

// ---- X_H dynamic programme --------------------------------------------

TEST(XhDpTest, ConstantColoringIsZero) {
  Rng rng(6);
  const auto m = RandomHost(10, 0.6, 0.1, rng);
  const auto j = RandomJ(10, 3, rng);
  const auto shape = RandomShape(4, 1, 2, rng);
  VertexColoring mu;
  mu.num_colors = 4;
  mu.colors.assign(10, 2);
  EXPECT_EQ(XhDp(m, mu, shape, j), 0.0);
}

TEST(XhDpTest, ZeroWeightsAreZero) {
  Rng rng(7);
  const WeightedGraph m(SimpleGraph(9), 0.0);
  const auto j = RandomJ(9, 3, rng);
  const auto shape = RandomShape(4, 1, 3, rng);
  const auto mu = VertexColoring::Uniform(9, 4, rng);
  EXPECT_EQ(XhDp(m, mu, shape, j), 0.0);
}

TEST(XhDpTest, MatchesBruteForce) {
  Rng rng(8);
  int nonzero = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 7 + trial % 6;            // up to 12
    const int k = 2 + trial % 4;            // up to 5
    const int len = 2 + (trial / 4) % 2;    // 2 or 3
    const double background = trial % 3 == 0 ? 0.0 : 0.15;
    const auto m = RandomHost(n, 0.5, background, rng);
    const auto j = RandomJ(n, 2 + trial % 3, rng);
    const auto shape = RandomShape(k, 1, len, rng);
    const auto mu = VertexColoring::Uniform(n, k, rng);
    const double want = XhBruteforce(m, mu, shape, j);
    const double got = XhDp(m, mu, shape, j);
    EXPECT_LE(RelErr(got, want), 1e-9) << "trial " << trial;
    nonzero += want != 0.0;
  }
  EXPECT_GT(nonzero, 60);
}

// Length 4 runs on the factored table, length 5 on the dense one.
TEST(XhDpTest, LongerPathsMatchBruteForce) {
  Rng rng(18);
  int nonzero = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 8 + trial % 4;
    const int k = 3 + trial % 3;
    const int len = 4 + trial % 2;
    const auto m = RandomHost(n, 0.6, 0.1, rng);
    const auto j = RandomJ(n, 2 + trial % 2, rng);
    const auto shape = RandomShape(k, 1, len, rng);
    const auto mu = VertexColoring::Uniform(n, k, rng);
    const double want = XhBruteforce(m, mu, shape, j);
    EXPECT_LE(RelErr(XhDp(m, mu, shape, j), want), 1e-9) << "trial " << trial;
    nonzero += want != 0.0;
  }
  EXPECT_GT(nonzero, 20);
}

TEST(XhDpTest, TwoPairsMatchBruteForce) {
  Rng rng(9);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 9;
    const auto m = RandomHost(n, 0.5, trial % 2 ? 0.1 : 0.0, rng);
    const auto j = RandomJ(n, 3, rng);
    const auto shape = RandomShape(4 + trial % 2, 2, 2, rng);
    const auto mu = VertexColoring::Uniform(n, shape.tree.size, rng);
    double got = 0.0;
    try {
      got = XhDp(m, mu, shape, j);
    } catch (const Error& err) {
      EXPECT_EQ(err.kind(), ErrorKind::kShapeUnsupported);
      continue;
    }
    EXPECT_LE(RelErr(got, XhBruteforce(m, mu, shape, j)), 1e-9) << trial;
  }
}

TEST(XhDpTest, ClosedPairInsideOpenSubtreeIsSupported) {
  // Star with centre 0; rooted at leaf 1, the centre's subtree holds the
  // open end 2 and the whole pair {3,4}.
  DecoratedTreeShape shape;
  shape.tree = TreeFromCode("(()()()())", true);
  shape.path_len = 2;
  shape.pairing.pairs = {{1, 2}, {3, 4}};
  Rng rng(10);
  const auto m = RandomHost(8, 0.5, 0.1, rng);
  const auto j = RandomJ(8, 2, rng);
  const auto mu = VertexColoring::Uniform(8, 5, rng);
  EXPECT_LE(RelErr(XhDp(m, mu, shape, j), XhBruteforce(m, mu, shape, j)), 1e-9);
}

TEST(XhDpTest, TwoOpenPairsAreUnsupported) {
  // Path 0-1-2-3-4-5 rooted at 0: the subtree of 2 holds 3 and 5, whose
  // partners 0 and 1 both sit above it.
  DecoratedTreeShape chain;
  chain.tree = TreeFromCode("(((((())))))", true);
  ASSERT_EQ(chain.tree.size, 6);
  chain.path_len = 2;
  chain.pairing.pairs = {{0, 3}, {1, 5}};
  Rng rng(15);
  const auto m = RandomHost(8, 0.5, 0.1, rng);
  const auto j = RandomJ(8, 2, rng);
  const auto mu = VertexColoring::Uniform(8, 6, rng);
  EXPECT_THROW(
      {
        try {
          XhDp(m, mu, chain, j);
        } catch (const Error& err) {
          EXPECT_EQ(err.kind(), ErrorKind::kShapeUnsupported);
          throw;
        }
      },
      Error);
}

TEST(XhDpTest, MemoChangesNoBit) {
  Rng rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 10;
    const auto m = RandomHost(n, 0.5, 0.1, rng);
    const auto j = RandomJ(n, 3, rng);
    const auto shape = RandomShape(5, 1, 2 + trial % 2, rng);
    const auto mu = VertexColoring::Uniform(n, 5, rng);
    const NbTable table(m, j, shape.path_len);
    const double with = XhDp(m, mu, shape, j, table, {.memo = true});
    const double without = XhDp(m, mu, shape, j, table, {.memo = false});
    EXPECT_EQ(with, without);
  }
}

TEST(XhBruteforceTest, EmptyHostIsZero) {
  Rng rng(12);
  const auto shape = RandomShape(3, 1, 2, rng);
  const auto mu = VertexColoring::Uniform(0, 3, rng);
  EXPECT_EQ(XhBruteforce(WeightedGraph(SimpleGraph(0), 0.0), mu, shape,
                         VertexSet(0, {})),
            0.0);
}

TEST(XhBruteforceTest, SingleEmbeddingHost) {
  // Host is exactly one embedding of the path 0-1-2 with pair {0,2} and a
  // length-two path through J vertex 3.
  DecoratedTreeShape shape;
  shape.tree = TreeFromCode("((()))", true);
  shape.path_len = 2;
  shape.pairing.pairs = {{0, 2}};
  SimpleGraph g(4);
  g.AddEdge(0, 1, 2.0);
  g.AddEdge(1, 2, 3.0);
  g.AddEdge(0, 3, 5.0);
  g.AddEdge(3, 2, 7.0);
  const WeightedGraph m(std::move(g), 0.0);
  const VertexSet j(4, {3});
  VertexColoring mu;
  mu.num_colors = 3;
  mu.colors = {0, 1, 2, 0};
  // The path automorphism reverses both the tree and the pair, so the
  // single multigraph is counted once.
  EXPECT_EQ(XhBruteforce(m, mu, shape, j), 2.0 * 3.0 * 5.0 * 7.0);
  EXPECT_NEAR(XhDp(m, mu, shape, j), 2.0 * 3.0 * 5.0 * 7.0, 1e-12);
  mu.colors = {0, 0, 2, 0};
  EXPECT_EQ(XhBruteforce(m, mu, shape, j), 0.0);
}

// ---- colour-coding probabilities and unbiasedness ----------------------

TEST(ColorfulProbabilityTest, ExactValues) {
  EXPECT_DOUBLE_EQ(ColorfulProbability(4, 4), 24.0 / 256.0);
  EXPECT_DOUBLE_EQ(ColorfulProbability(6, 6), 720.0 / 46656.0);
  EXPECT_DOUBLE_EQ(ColorfulProbability(2, 5), 20.0 / 25.0);
  EXPECT_EQ(DefaultColorings(4), 11);  // ceil(256 / 24)
  EXPECT_EQ(DefaultColorings(6), 65);  // ceil(46656 / 720)
}

TEST(UnbiasednessTest, ColorAverageMatchesExactSum) {
  Rng rng(13);
  const int draws = 10000;
  int tested = 0;
  for (int instance = 0; tested < 20 && instance < 60; ++instance) {
    const int n = 9;
    const int k = 3 + instance % 2;
    const auto m = RandomHost(n, 0.5, 0.1, rng);
    const auto j = RandomJ(n, 3, rng);
    const auto shape = RandomShape(k, 1, 2, rng);
    const double exact = EmbeddingSum(m, shape, j, PathMode::kNb);
    if (exact == 0.0) continue;
    const NbTable table(m, j, shape.path_len);
    const double r = ColorfulProbability(k, k);
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < draws; ++i) {
      const auto mu = VertexColoring::Uniform(n, k, rng);
      const double x = XhDp(m, mu, shape, j, table) / r;
      sum += x;
      sum2 += x * x;
    }
    const double mean = sum / draws;
    const double se = std::sqrt((sum2 / draws - mean * mean) / (draws - 1));
    EXPECT_LE(std::fabs(mean - exact), 3 * se)
        << "instance " << instance << " exact " << exact << " mean " << mean;
    ++tested;
  }
  EXPECT_EQ(tested, 20);
}

TEST(VarianceScalingTest, VarianceFallsLikeOneOverT) {
  Rng rng(14);
  const int n = 10;
  const auto m = RandomHost(n, 0.6, 0.1, rng);
  const auto j = RandomJ(n, 3, rng);
  DecoratedTreeShape shape;
  shape.tree = TreeFromCode("((())())", true);
  ASSERT_EQ(shape.tree.size, 4);
  shape.path_len = 2;
  shape.pairing.pairs = {{2, 3}};
  const NbTable table(m, j, 2);
  const int reps = 150;
  std::vector<double> log_t, log_var;
  for (int t : {10, 100, 1000}) {
    double sum = 0.0, sum2 = 0.0;
    for (int rep = 0; rep < reps; ++rep) {
      double avg = 0.0;
      for (int i = 0; i < t; ++i) {
        avg += XhDp(m, VertexColoring::Uniform(n, 4, rng), shape, j, table);
      }
      avg /= t;
      sum += avg;
      sum2 += avg * avg;
    }
    const double mean = sum / reps;
    log_t.push_back(std::log(t));
    log_var.push_back(std::log((sum2 / reps - mean * mean) * reps / (reps - 1)));
  }
  const double mt = (log_t[0] + log_t[1] + log_t[2]) / 3;
  const double mv = (log_var[0] + log_var[1] + log_var[2]) / 3;
  double num = 0.0, den = 0.0;
  for (int i = 0; i < 3; ++i) {
    num += (log_t[i] - mt) * (log_var[i] - mv);
    den += (log_t[i] - mt) * (log_t[i] - mt);
  }
  const double slope = num / den;
  EXPECT_GE(slope, -1.3);
  EXPECT_LE(slope, -0.7);
}

// ---- f_bar ---------------------------------------------------------------

struct Instance {
  ModelParams p;
  SimpleGraph a, b;
  VertexSet j_a, j_b;
};

Instance TinyInstance(uint64_t seed) {
  Instance x;
  x.p.n = 10;
  x.p.lambda = 4.0;
  x.p.eps = 0.6;
  x.p.s = 0.9;
  x.p.j_frac = 0.3;
  const auto sample = SampleCorrelated(x.p, seed);
  x.a = sample.a;
  x.b = sample.b;
  Rng rng = MakeRng(DeriveSeed(seed, 9));
  x.j_a = SampleJ(x.p, rng);
  x.j_b = SampleJ(x.p, rng);
  return x;
}

Family OneShapeFamily() {
  Family f;
  DecoratedTreeShape shape;
  shape.tree = TreeFromCode("((())())", true);
  shape.path_len = 2;
  shape.pairing.pairs = {{2, 3}};
  f.config.aleph = 4;
  f.shapes.push_back(shape);
  return f;
}

TEST(FBarTest, EmptyFamilyIsZero) {
  const auto x = TinyInstance(1);
  EstimatorConfig cfg;
  cfg.t = 3;
  EXPECT_EQ(FBar(x.a, x.b, Family{}, x.j_a, x.j_b, x.p, cfg).value, 0.0);
}

TEST(FBarTest, DeterministicGivenSeed) {
  const auto x = TinyInstance(2);
  const Family f = OneShapeFamily();
  EstimatorConfig cfg;
  cfg.t = 20;
  cfg.seed = 77;
  const double first = FBar(x.a, x.b, f, x.j_a, x.j_b, x.p, cfg).value;
  EXPECT_EQ(first, FBar(x.a, x.b, f, x.j_a, x.j_b, x.p, cfg).value);
  cfg.seed = 78;
  EXPECT_NE(first, FBar(x.a, x.b, f, x.j_a, x.j_b, x.p, cfg).value);
}

TEST(FBarTest, ConvergesToExactNbStatistic) {
  const Family f = OneShapeFamily();
  const auto& shape = f.shapes[0];
  const int t = 10000;
  int checked = 0;
  for (uint64_t seed = 0; checked < 3 && seed < 40; ++seed) {
    const auto x = TinyInstance(seed);
    const auto exact = FExact(x.a, x.b, f, x.j_a, x.j_b, x.p, PathMode::kNb);
    if (exact.per_shape[0].sum_a == 0.0 || exact.per_shape[0].sum_b == 0.0) {
      continue;
    }
    EstimatorConfig cfg;
    cfg.t = t;
    cfg.seed = 1000 + seed;
    const auto bar = FBar(x.a, x.b, f, x.j_a, x.j_b, x.p, cfg);

    // Rebuild the per-colouring values to get the estimator's spread.
    const double r = ColorfulProbability(4, 4);
    const double scale = std::pow(x.p.d(), -shape.num_edges()) / r;
    auto per_coloring = [&](const SimpleGraph& g, const VertexSet& j, int side) {
      const auto m = Standardize(g, x.p, /*plain_centering=*/true);
      const NbTable table(m, j, shape.path_len);
      std::vector<double> xs(t);
      for (int i = 0; i < t; ++i) {
        Rng rng = MakeRng(DeriveSeed(cfg.seed, side, i));
        const auto mu = VertexColoring::Uniform(x.p.n, 4, rng);
        xs[i] = XhDp(m, mu, shape, j, table) * scale;
      }
      return xs;
    };
    const auto xa = per_coloring(x.a, x.j_a, 0);
    const auto xb = per_coloring(x.b, x.j_b, 1);
    auto mean_var = [&](const std::vector<double>& v) {
      double s = 0.0, s2 = 0.0;
      for (double e : v) s += e, s2 += e * e;
      const double m = s / v.size();
      return std::make_pair(m, (s2 / v.size() - m * m) * v.size() / (v.size() - 1));
    };
    const auto [ma, va] = mean_var(xa);
    const auto [mb, vb] = mean_var(xb);
    const double w = bar.per_shape[0].weight;
    EXPECT_LE(RelErr(bar.per_shape[0].sum_a, ma), 1e-9);
    EXPECT_LE(RelErr(bar.per_shape[0].sum_b, mb), 1e-9);
    const double se = std::fabs(w) * std::sqrt(mb * mb * va / t + ma * ma * vb / t);
    EXPECT_LE(std::fabs(bar.value - exact.value), 4 * se)
        << "seed " << seed << " bar " << bar.value << " exact " << exact.value;
    ++checked;
  }
  EXPECT_EQ(checked, 3);
}

}  // namespace
}  // namespace dtstat
