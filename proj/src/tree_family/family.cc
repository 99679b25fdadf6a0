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
#include <cstdio>
#include <set>

#include "dtstat/errors.h"
#include "dtstat/family.h"
#include "dtstat/rng.h"
#include "dtstat/tree_enum.h"

namespace dtstat {
namespace {

constexpr int kDrawsPerPairing = 256;

Pairing Normalize(std::vector<std::pair<int, int>> pairs) {
  for (auto& [u, v] : pairs) {
    if (u > v) std::swap(u, v);
  }
  std::sort(pairs.begin(), pairs.end());
  return Pairing{std::move(pairs)};
}

bool CrossPairingsSpaced(const RootedView& view, const Pairing& a,
                         const Pairing& b, int min_dist) {
  for (int u : a.Vertices()) {
    for (int v : b.Vertices()) {
      if (u != v && view.dist[u][v] < min_dist) return false;
    }
  }
  return true;
}

// Greedy well-spaced pool of admissible pairs, visited in random order.
std::vector<std::pair<int, int>> SpacedPool(
    const RootedView& view, std::vector<std::pair<int, int>> candidates,
    const FamilyConfig& cfg, Rng& rng) {
  for (size_t i = candidates.size(); i > 1; --i) {
    std::uniform_int_distribution<size_t> pick(0, i - 1);
    std::swap(candidates[i - 1], candidates[pick(rng)]);
  }
  std::vector<std::pair<int, int>> pool;
  std::vector<int> taken;
  for (const auto& [u, v] : candidates) {
    bool spaced = true;
    for (int w : taken) {
      if (view.dist[u][w] < cfg.cross_pair_dist ||
          view.dist[v][w] < cfg.cross_pair_dist) {
        spaced = false;
        break;
      }
    }
    if (!spaced) continue;
    pool.push_back({u, v});
    taken.push_back(u);
    taken.push_back(v);
  }
  return pool;
}

}  // namespace

std::vector<int> Pairing::Vertices() const {
  std::vector<int> out;
  for (const auto& [u, v] : pairs) {
    out.push_back(u);
    out.push_back(v);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool VerifyPairing(const CanonicalTree& t, const Pairing& pairing,
                   const FamilyConfig& cfg) {
  if (static_cast<int>(pairing.pairs.size()) != cfg.num_pairs) return false;
  const RootedView view(t);
  const std::vector<int> verts = pairing.Vertices();
  if (std::adjacent_find(verts.begin(), verts.end()) != verts.end()) {
    return false;
  }
  for (int v : verts) {
    if (v <= 0 || v >= t.size) return false;
    if (view.des_size[v] < cfg.tiota_threshold) return false;
  }
  for (int root = 0; root < t.size; ++root) {
    if (view.des_size[root] < cfg.tiota_threshold) continue;
    int inside = 0;
    for (int v : verts) inside += view.IsAncestor(root, v) ? 1 : 0;
    if (inside > cfg.sim_k_frac * view.des_size[root] + 1e-12) return false;
  }
  for (size_t i = 0; i < pairing.pairs.size(); ++i) {
    const auto [u, v] = pairing.pairs[i];
    const int d = view.dist[u][v];
    if (d < cfg.pair_dist_lo || d > cfg.pair_dist_hi) return false;
    for (size_t j = 0; j < pairing.pairs.size(); ++j) {
      if (i == j) continue;
      for (int w : {pairing.pairs[j].first, pairing.pairs[j].second}) {
        if (view.dist[u][w] < cfg.cross_pair_dist ||
            view.dist[v][w] < cfg.cross_pair_dist) {
          return false;
        }
      }
    }
  }
  return true;
}

int SymmetricDifference(const Pairing& a, const Pairing& b) {
  const auto va = a.Vertices();
  const auto vb = b.Vertices();
  std::vector<int> diff;
  std::set_symmetric_difference(va.begin(), va.end(), vb.begin(), vb.end(),
                                std::back_inserter(diff));
  return static_cast<int>(diff.size());
}

Pairing CanonicalPairing(const CanonicalTree& t, const Pairing& pairing) {
  Pairing best = Normalize(pairing.pairs);
  ForEachRootedAutomorphism(t.Adjacency(), 0,
                            [&](const std::vector<int>& perm) {
                              std::vector<std::pair<int, int>> mapped;
                              for (const auto& [u, v] : pairing.pairs) {
                                mapped.push_back({perm[u], perm[v]});
                              }
                              Pairing image = Normalize(std::move(mapped));
                              if (image < best) best = std::move(image);
                              return true;
                            });
  return best;
}

std::vector<Pairing> SelectPairings(const CanonicalTree& t,
                                    const FamilyConfig& cfg, uint64_t seed) {
  cfg.Validate();
  const RootedView view(t);
  std::vector<int> eligible;
  for (int v = 1; v < t.size; ++v) {
    const int degree = static_cast<int>(view.children[v].size()) + 1;
    if (view.des_size[v] >= cfg.tiota_threshold && degree <= cfg.max_degree) {
      eligible.push_back(v);
    }
  }
  std::vector<std::pair<int, int>> candidates;
  for (size_t i = 0; i < eligible.size(); ++i) {
    for (size_t j = i + 1; j < eligible.size(); ++j) {
      const int d = view.dist[eligible[i]][eligible[j]];
      if (d >= cfg.pair_dist_lo && d <= cfg.pair_dist_hi) {
        candidates.push_back({eligible[i], eligible[j]});
      }
    }
  }

  Rng rng = MakeRng(seed);
  std::vector<Pairing> chosen;
  const int draws = kDrawsPerPairing * cfg.num_pairings;
  for (int draw = 0; draw < draws && static_cast<int>(chosen.size()) <
                                          cfg.num_pairings;
       ++draw) {
    const auto pool = SpacedPool(view, candidates, cfg, rng);
    if (static_cast<int>(pool.size()) < cfg.num_pairs) continue;
    std::vector<std::pair<int, int>> picked;
    for (int idx : SampleWithoutReplacement(static_cast<int32_t>(pool.size()),
                                            cfg.num_pairs, rng)) {
      picked.push_back(pool[idx]);
    }
    const Pairing candidate = CanonicalPairing(t, Normalize(picked));
    if (!VerifyPairing(t, candidate, cfg)) continue;
    bool fits = true;
    for (const auto& prev : chosen) {
      if (prev == candidate ||
          SymmetricDifference(prev, candidate) < cfg.symdiff_min ||
          !CrossPairingsSpaced(view, prev, candidate, cfg.pair_dist_lo)) {
        fits = false;
        break;
      }
    }
    if (fits) chosen.push_back(candidate);
  }
  if (chosen.empty()) {
    throw Error(ErrorKind::kInfeasibleConfig,
                "no pairing satisfies the configured windows on tree " +
                    t.code);
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

Family BuildFamily(const FamilyConfig& cfg, uint64_t seed) {
  cfg.Validate();
  Family family;
  family.config = cfg;
  SimilarityOracle oracle(cfg);
  const auto trees = EnumerateRootedTrees(cfg.aleph);
  bool any_admissible = false;
  for (size_t i = 0; i < trees.size(); ++i) {
    if (!CheckAdmissible(trees[i], cfg, oracle).admissible) continue;
    any_admissible = true;
    std::vector<Pairing> pairings;
    try {
      pairings = SelectPairings(trees[i], cfg, DeriveSeed(seed, i));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kInfeasibleConfig) throw;
      continue;  // admissible, but the distance windows do not fit
    }
    for (auto& p : pairings) {
      family.shapes.push_back({trees[i], std::move(p), cfg.path_len});
    }
  }
  if (!any_admissible) {
    throw Error(ErrorKind::kEmptyFamily,
                "no rooted tree of size " + std::to_string(cfg.aleph) +
                    " is admissible");
  }
  if (family.shapes.empty()) {
    throw Error(ErrorKind::kEmptyFamily,
                "admissible trees exist but none admits a pairing");
  }
  return family;
}

nlohmann::json FamilyConfigToJson(const FamilyConfig& c) {
  return {{"aleph", c.aleph},
          {"num_pairs", c.num_pairs},
          {"num_pairings", c.num_pairings},
          {"path_len", c.path_len},
          {"max_degree", c.max_degree},
          {"max_armpath", c.max_armpath},
          {"tiota_min_frac", c.tiota_min_frac},
          {"tiota_threshold", c.tiota_threshold},
          {"sim_k_frac", c.sim_k_frac},
          {"sim_len", c.sim_len},
          {"pair_dist_lo", c.pair_dist_lo},
          {"pair_dist_hi", c.pair_dist_hi},
          {"cross_pair_dist", c.cross_pair_dist},
          {"symdiff_min", c.symdiff_min},
          {"similarity_budget", c.similarity_budget}};
}

FamilyConfig FamilyConfigFromJson(const nlohmann::json& j) {
  FamilyConfig c;
  try {
    c.aleph = j.value("aleph", c.aleph);
    c.num_pairs = j.value("num_pairs", c.num_pairs);
    c.num_pairings = j.value("num_pairings", c.num_pairings);
    c.path_len = j.value("path_len", c.path_len);
    c.max_degree = j.value("max_degree", c.max_degree);
    c.max_armpath = j.value("max_armpath", c.max_armpath);
    c.tiota_min_frac = j.value("tiota_min_frac", c.tiota_min_frac);
    c.tiota_threshold = j.value("tiota_threshold", c.tiota_threshold);
    c.sim_k_frac = j.value("sim_k_frac", c.sim_k_frac);
    c.sim_len = j.value("sim_len", c.sim_len);
    c.pair_dist_lo = j.value("pair_dist_lo", c.pair_dist_lo);
    c.pair_dist_hi = j.value("pair_dist_hi", c.pair_dist_hi);
    c.cross_pair_dist = j.value("cross_pair_dist", c.cross_pair_dist);
    c.symdiff_min = j.value("symdiff_min", c.symdiff_min);
    c.similarity_budget = j.value("similarity_budget", c.similarity_budget);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParseError, e.what());
  }
  return c;
}

nlohmann::json FamilyToJson(const Family& family) {
  nlohmann::json shapes = nlohmann::json::array();
  for (const auto& s : family.shapes) {
    nlohmann::json pairs = nlohmann::json::array();
    for (const auto& [u, v] : s.pairing.pairs) pairs.push_back({u, v});
    shapes.push_back({{"tree_code", s.tree.code}, {"root", 0},
                      {"pairs", pairs}});
  }
  return {{"config", FamilyConfigToJson(family.config)}, {"shapes", shapes}};
}

Family FamilyFromJson(const nlohmann::json& j) {
  Family family;
  try {
    family.config = FamilyConfigFromJson(j.at("config"));
    family.config.Validate();
    for (const auto& s : j.at("shapes")) {
      if (s.value("root", 0) != 0) {
        throw Error(ErrorKind::kParseError,
                    "shape roots must be canonical vertex 0");
      }
      DecoratedTreeShape shape;
      shape.tree = TreeFromCode(s.at("tree_code").get<std::string>(), true);
      shape.path_len = family.config.path_len;
      std::vector<std::pair<int, int>> pairs;
      for (const auto& p : s.at("pairs")) {
        const int u = p.at(0).get<int>();
        const int v = p.at(1).get<int>();
        if (u < 0 || v < 0 || u >= shape.tree.size || v >= shape.tree.size) {
          throw Error(ErrorKind::kParseError, "pair vertex out of range");
        }
        pairs.push_back({u, v});
      }
      shape.pairing = Normalize(std::move(pairs));
      family.shapes.push_back(std::move(shape));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParseError, e.what());
  }
  return family;
}

std::string FamilyHash(const Family& family) {
  const std::string text = FamilyToJson(family).dump();
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace dtstat
