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

// Admissible rooted trees, pairings and the decorated-tree family.

#ifndef DTSTAT_FAMILY_H_
#define DTSTAT_FAMILY_H_

#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "dtstat/tree_code.h"
#include "json.hpp"

namespace dtstat {

// Finite-scale thresholds. Asymptotic defaults, for reference, with iota the
// vanishing overlap fraction: max_degree, tiota_threshold ~ log^2(1/iota);
// tiota_min_frac ~ 1/log^4(1/iota); symdiff_min ~ num_pairs/2.
struct FamilyConfig {
  int aleph = 7;          // tree size
  int num_pairs = 1;      // pairs per pairing
  int num_pairings = 1;   // pairings per admissible tree
  int path_len = 2;       // length of each attached path
  int max_degree = 3;
  int max_armpath = 3;    // arm-paths must be shorter than this
  double tiota_min_frac = 0.3;
  int tiota_threshold = 2;
  double sim_k_frac = 0.5;
  int sim_len = 1;
  int pair_dist_lo = 1;
  int pair_dist_hi = 4;
  int cross_pair_dist = 5;
  int symdiff_min = 1;
  uint64_t similarity_budget = 1'000'000;

  // Throws kInvalidConfig.
  void Validate() const;
};

nlohmann::json FamilyConfigToJson(const FamilyConfig& cfg);
FamilyConfig FamilyConfigFromJson(const nlohmann::json& j);

// Parent/children/descendant-size view of a rooted canonical tree.
struct RootedView {
  explicit RootedView(const CanonicalTree& t);

  int size() const { return static_cast<int>(parent.size()); }
  // Canonical code of the descendant tree of v.
  const std::string& SubtreeCode(int v) const { return subtree_code[v]; }
  CanonicalTree Subtree(int v) const;
  bool IsAncestor(int a, int v) const;  // a is v or above v

  std::vector<int> parent;
  std::vector<std::vector<int>> children;
  std::vector<int> des_size;
  std::vector<int> depth;
  std::vector<std::string> subtree_code;
  std::vector<std::vector<int>> dist;
};

// Vertices whose descendant tree has at least `threshold` vertices.
std::vector<int> MajorSubtree(const CanonicalTree& t, int threshold);

struct ArmPath {
  int start = 0;
  int length = 0;  // edges
  bool operator==(const ArmPath& o) const {
    return start == o.start && length == o.length;
  }
};

// Maximal non-root vertices whose descendant tree is a bare path hanging
// from them.
std::vector<ArmPath> ArmPaths(const CanonicalTree& t);

// Decides the similarity relation by exhaustive search over arm-path
// attachments. Caches the attachment closure of every code it sees.
class SimilarityOracle {
 public:
  explicit SimilarityOracle(const FamilyConfig& cfg) : cfg_(cfg) {}

  bool Similar(const CanonicalTree& a, const CanonicalTree& b);
  uint64_t nodes_visited() const { return nodes_; }

 private:
  // Augmented-tree codes grouped by size.
  using Closure = std::map<int, std::set<std::string>>;
  const Closure& ClosureOf(const CanonicalTree& t);

  FamilyConfig cfg_;
  std::map<std::string, Closure> cache_;
  uint64_t nodes_ = 0;
};

bool Similar(const CanonicalTree& a, const CanonicalTree& b,
             const FamilyConfig& cfg);

struct AdmissibilityReport {
  std::array<bool, 5> item{};
  bool admissible = false;
};

AdmissibilityReport CheckAdmissible(const CanonicalTree& t,
                                    const FamilyConfig& cfg);
AdmissibilityReport CheckAdmissible(const CanonicalTree& t,
                                    const FamilyConfig& cfg,
                                    SimilarityOracle& oracle);

struct Pairing {
  std::vector<std::pair<int, int>> pairs;  // each with first < second

  std::vector<int> Vertices() const;
  bool operator==(const Pairing& o) const { return pairs == o.pairs; }
  bool operator<(const Pairing& o) const { return pairs < o.pairs; }
};

// Items (1), (2), (4) of the pairing conditions for one pairing.
bool VerifyPairing(const CanonicalTree& t, const Pairing& pairing,
                   const FamilyConfig& cfg);
int SymmetricDifference(const Pairing& a, const Pairing& b);

// Lexicographically least image of the pairing under root-fixing
// automorphisms.
Pairing CanonicalPairing(const CanonicalTree& t, const Pairing& pairing);

// Up to cfg.num_pairings pairwise-distinct pairings. Throws
// kInfeasibleConfig when none can be placed.
std::vector<Pairing> SelectPairings(const CanonicalTree& t,
                                    const FamilyConfig& cfg, uint64_t seed);

struct DecoratedTreeShape {
  CanonicalTree tree;  // rooted, canonical labelling
  Pairing pairing;
  int path_len = 2;

  int num_tree_edges() const { return tree.size - 1; }
  int num_edges() const {
    return num_tree_edges() +
           path_len * static_cast<int>(pairing.pairs.size());
  }
};

struct Family {
  FamilyConfig config;
  std::vector<DecoratedTreeShape> shapes;
};

// Throws kEmptyFamily when no tree of size aleph is admissible.
Family BuildFamily(const FamilyConfig& cfg, uint64_t seed);

nlohmann::json FamilyToJson(const Family& family);
Family FamilyFromJson(const nlohmann::json& j);
// 16 hex digits of a 64-bit FNV-1a hash of the serialized family.
std::string FamilyHash(const Family& family);

}  // namespace dtstat

#endif  // DTSTAT_FAMILY_H_
