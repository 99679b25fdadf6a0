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

#include "dtstat/rng.h"

#include <algorithm>
#include <numeric>

#include "dtstat/errors.h"

namespace dtstat {

uint64_t Mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

uint64_t DeriveSeed(uint64_t master, uint64_t index) {
  return Mix64(Mix64(master) ^ Mix64(index + 0x632be59bd9b4e019ULL));
}

uint64_t DeriveSeed(uint64_t master, uint64_t index, uint64_t sub) {
  return DeriveSeed(DeriveSeed(master, index), sub);
}

Rng MakeRng(uint64_t seed) {
  std::seed_seq seq{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32)};
  return Rng(seq);
}

std::vector<int32_t> SampleWithoutReplacement(int32_t n, int32_t k, Rng& rng) {
  if (k < 0 || k > n) {
    throw Error(ErrorKind::kInvalidArgument, "sample size outside [0, n]");
  }
  // Partial Fisher-Yates over an index vector.
  std::vector<int32_t> pool(n);
  std::iota(pool.begin(), pool.end(), 0);
  for (int32_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<int32_t> pick(i, n - 1);
    std::swap(pool[i], pool[pick(rng)]);
  }
  pool.resize(k);
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace dtstat
