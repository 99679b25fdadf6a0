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

#include "dtstat/graph.h"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "dtstat/errors.h"

namespace dtstat {
namespace {

void CheckPair(int n, Vertex u, Vertex v) {
  if (u < 0 || v < 0 || u >= n || v >= n) {
    throw Error(ErrorKind::kInvalidArgument,
                "edge endpoint out of range: " + std::to_string(u) + " " +
                    std::to_string(v) + " with n=" + std::to_string(n));
  }
  if (u == v) {
    throw Error(ErrorKind::kInvalidArgument,
                "self-loop at " + std::to_string(u));
  }
}

std::pair<Vertex, Vertex> DecodeKey(uint64_t key) {
  return {static_cast<Vertex>(key >> 32),
          static_cast<Vertex>(key & 0xffffffffu)};
}

}  // namespace

SimpleGraph::SimpleGraph(int n) : adjacency_(n) {
  if (n < 0) throw Error(ErrorKind::kInvalidArgument, "negative vertex count");
}

bool SimpleGraph::AddEdge(Vertex u, Vertex v, double w) {
  CheckPair(n(), u, v);
  auto [it, inserted] = weights_.emplace(EdgeKey(u, v), w);
  if (!inserted) return false;
  adjacency_[u].push_back({v, w});
  adjacency_[v].push_back({u, w});
  if (w != 1.0) weighted_ = true;
  return true;
}

bool SimpleGraph::HasEdge(Vertex u, Vertex v) const {
  if (u == v) return false;
  return weights_.count(EdgeKey(u, v)) != 0;
}

double SimpleGraph::Weight(Vertex u, Vertex v) const {
  if (u == v) return 0.0;
  auto it = weights_.find(EdgeKey(u, v));
  return it == weights_.end() ? 0.0 : it->second;
}

std::vector<Edge> SimpleGraph::Edges() const {
  std::vector<Edge> out;
  out.reserve(weights_.size());
  for (const auto& [key, w] : weights_) {
    auto [u, v] = DecodeKey(key);
    out.push_back({u, v, w});
  }
  std::sort(out.begin(), out.end(), [](const Edge& a, const Edge& b) {
    return a.u != b.u ? a.u < b.u : a.v < b.v;
  });
  return out;
}

WeightedGraph::WeightedGraph(SimpleGraph support, double background)
    : support_(std::move(support)), background_(background) {}

void Multigraph::AddVertex(Vertex v) {
  if (v < 0 || v >= n_) {
    throw Error(ErrorKind::kInvalidArgument, "vertex out of range");
  }
  declared_.push_back(v);
}

void Multigraph::AddEdge(Vertex u, Vertex v, uint32_t count) {
  CheckPair(n_, u, v);
  uint32_t& m = multiplicities_[EdgeKey(u, v)];
  if (static_cast<uint64_t>(m) + count > kMaxMultiplicity) {
    throw Error(ErrorKind::kMultiplicityOverflow,
                "edge multiplicity above 2^16");
  }
  m += count;
}

uint32_t Multigraph::Multiplicity(Vertex u, Vertex v) const {
  if (u == v) return 0;
  auto it = multiplicities_.find(EdgeKey(u, v));
  return it == multiplicities_.end() ? 0 : it->second;
}

std::vector<Vertex> Multigraph::Vertices() const {
  std::vector<Vertex> out = declared_;
  for (const auto& [key, m] : multiplicities_) {
    auto [u, v] = DecodeKey(key);
    out.push_back(u);
    out.push_back(v);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

int64_t Multigraph::TotalMultiplicity() const {
  int64_t total = 0;
  for (const auto& [key, m] : multiplicities_) total += m;
  return total;
}

SimpleGraph Multigraph::Simplify() const {
  SimpleGraph g(n_);
  for (const auto& [key, m] : multiplicities_) {
    auto [u, v] = DecodeKey(key);
    g.AddEdge(u, v);
  }
  return g;
}

int64_t Multigraph::Degree(Vertex v) const {
  int64_t d = 0;
  for (const auto& [key, m] : multiplicities_) {
    auto [a, b] = DecodeKey(key);
    if (a == v || b == v) d += m;
  }
  return d;
}

int Multigraph::SimpleDegree(Vertex v) const {
  int d = 0;
  for (const auto& [key, m] : multiplicities_) {
    auto [a, b] = DecodeKey(key);
    if (a == v || b == v) ++d;
  }
  return d;
}

int64_t Tau(const SimpleGraph& g) { return g.num_edges() - g.n(); }

int64_t Tau(const Multigraph& g) {
  return g.TotalMultiplicity() - static_cast<int64_t>(g.Vertices().size());
}

VertexColoring VertexColoring::Uniform(int n, int num_colors,
                                       std::mt19937_64& rng) {
  if (num_colors < 1 || num_colors > 64) {
    throw Error(ErrorKind::kInvalidArgument, "colour count must be in 1..64");
  }
  VertexColoring mu;
  mu.num_colors = num_colors;
  mu.colors.resize(n);
  std::uniform_int_distribution<int> pick(0, num_colors - 1);
  for (auto& c : mu.colors) c = static_cast<uint8_t>(pick(rng));
  return mu;
}

bool Colorful(const VertexColoring& mu, const std::vector<Vertex>& vertices) {
  uint64_t seen = 0;
  for (Vertex v : vertices) {
    const uint64_t bit = uint64_t{1} << mu.colors[v];
    if (seen & bit) return false;
    seen |= bit;
  }
  return true;
}

VertexSet::VertexSet(int n, const std::vector<Vertex>& members)
    : mask_(n, 0) {
  for (Vertex v : members) {
    if (v < 0 || v >= n) {
      throw Error(ErrorKind::kInvalidArgument, "set member out of range");
    }
    mask_[v] = 1;
  }
  for (Vertex v = 0; v < n; ++v) {
    if (mask_[v]) members_.push_back(v);
  }
}

std::vector<Vertex> VertexSet::Complement() const {
  std::vector<Vertex> out;
  for (Vertex v = 0; v < n(); ++v) {
    if (!mask_[v]) out.push_back(v);
  }
  return out;
}

void WriteEdgeList(std::ostream& out, const SimpleGraph& g) {
  out << "n " << g.n() << "\n";
  const bool weighted = g.weighted();
  std::ostringstream line;
  line.precision(17);
  for (const Edge& e : g.Edges()) {
    line.str("");
    line << e.u << " " << e.v;
    if (weighted) line << " " << e.w;
    out << line.str() << "\n";
  }
}

SimpleGraph ReadEdgeList(std::istream& in) {
  std::string line;
  int n = -1;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream header(line);
    std::string tag;
    if (!(header >> tag >> n) || tag != "n" || n < 0) {
      throw Error(ErrorKind::kParseError, "expected header 'n <count>'");
    }
    break;
  }
  if (n < 0) throw Error(ErrorKind::kParseError, "missing header");
  SimpleGraph g(n);
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    Vertex u, v;
    double w = 1.0;
    if (!(fields >> u >> v)) {
      throw Error(ErrorKind::kParseError, "bad edge line: " + line);
    }
    fields >> w;
    if (u < 0 || v < 0 || u >= n || v >= n || u == v) {
      throw Error(ErrorKind::kParseError, "bad edge endpoints: " + line);
    }
    g.AddEdge(u, v, w);
  }
  return g;
}

nlohmann::json GraphToJson(const SimpleGraph& g) {
  nlohmann::json edges = nlohmann::json::array();
  const bool weighted = g.weighted();
  for (const Edge& e : g.Edges()) {
    if (weighted) {
      edges.push_back({e.u, e.v, e.w});
    } else {
      edges.push_back({e.u, e.v});
    }
  }
  return {{"n", g.n()}, {"edges", edges}};
}

SimpleGraph GraphFromJson(const nlohmann::json& j) {
  try {
    SimpleGraph g(j.at("n").get<int>());
    for (const auto& e : j.at("edges")) {
      const double w = e.size() > 2 ? e.at(2).get<double>() : 1.0;
      g.AddEdge(e.at(0).get<Vertex>(), e.at(1).get<Vertex>(), w);
    }
    return g;
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorKind::kParseError, ex.what());
  }
}

}  // namespace dtstat
