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

// Seed derivation for reproducible, order-independent random streams.

#ifndef DTSTAT_RNG_H_
#define DTSTAT_RNG_H_

#include <cstdint>
#include <random>
#include <vector>

namespace dtstat {

using Rng = std::mt19937_64;

// SplitMix64 finalizer.
uint64_t Mix64(uint64_t x);

// Seed of stream `index` under `master`; distinct indices give
// statistically independent streams.
uint64_t DeriveSeed(uint64_t master, uint64_t index);
uint64_t DeriveSeed(uint64_t master, uint64_t index, uint64_t sub);

Rng MakeRng(uint64_t seed);

// k distinct values of {0, ..., n-1}, sorted.
std::vector<int32_t> SampleWithoutReplacement(int32_t n, int32_t k, Rng& rng);

}  // namespace dtstat

#endif  // DTSTAT_RNG_H_
