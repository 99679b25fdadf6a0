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

#include "dtstat/errors.h"
#include "dtstat/sbm.h"

namespace dtstat {

std::array<double, 4> EdgeJointLaw(const ModelParams& p, int g,
                                   bool correlated) {
  const double pg = (1.0 + g * p.eps) * p.lambda / p.n;
  const double s = p.s;
  if (correlated) {
    const double p11 = pg * s * s;
    const double p10 = pg * s * (1.0 - s);
    return {p11, p10, p10, 1.0 - p11 - 2.0 * p10};
  }
  const double m = pg * s;  // each graph alone
  return {m * m, m * (1.0 - m), (1.0 - m) * m, (1.0 - m) * (1.0 - m)};
}

EdgeMoment ExactEdgeMoments(int r, int t, const ModelParams& p,
                            bool correlated) {
  if (r < 0 || t < 0 || r + t < 1) {
    throw Error(ErrorKind::kInvalidArgument, "moment orders need r+t >= 1");
  }
  const double q = p.q();
  const double d = p.d();
  const double hi = (1.0 - q) / d;
  const double lo = -q / d;
  auto conditional = [&](int g) {
    const auto law = EdgeJointLaw(p, g, correlated);
    const double x[2] = {hi, lo};  // indexed by 1 - indicator
    double e = 0.0;
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        e += law[2 * a + b] * std::pow(x[a], r) * std::pow(x[b], t);
      }
    }
    return e;
  };
  const double plus = conditional(+1);
  const double minus = conditional(-1);
  return {(plus + minus) / 2.0, (plus - minus) / 2.0, r, t};
}

}  // namespace dtstat
