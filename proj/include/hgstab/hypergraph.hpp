// Copyright 2026 The hgstab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hgstab/errors.hpp"

namespace hgstab {

/// Subset of vertices, bit i = vertex i in the hypergraph's vertex order.
using VertexMask = std::uint64_t;
/// Subset of terminals, bit i = i-th terminal in vertex order.
using TerminalMask = std::uint32_t;

inline constexpr std::size_t kMaxVertices = 64;
inline constexpr std::size_t kDefaultEnumerationBound = 24;

struct Hyperedge {
  std::vector<std::size_t> vertices;  // sorted vertex indices, size >= 2
  long long weight = 1;

  friend bool operator==(const Hyperedge&, const Hyperedge&) = default;
};

/// Integer-weighted hypergraph with a distinguished nonempty terminal set.
///
/// Construction canonicalizes: edge vertex lists are sorted, duplicate edges
/// are merged by adding their weights, and the edge list is sorted.
class WeightedHypergraph {
 public:
  struct EdgeSpec {
    std::vector<std::string> vertices;
    long long weight = 1;
  };

  WeightedHypergraph(std::vector<std::string> vertices, const std::vector<EdgeSpec>& edges,
                     const std::vector<std::string>& terminals)
      : ids_(std::move(vertices)) {
    if (ids_.size() > kMaxVertices) {
      throw CapacityError("hypergraph has " + std::to_string(ids_.size()) +
                          " vertices; at most 64 are supported");
    }
    for (std::size_t i = 0; i < ids_.size(); ++i) {
      if (!index_.emplace(ids_[i], i).second) throw InputError("duplicate vertex id '" + ids_[i] + "'");
    }

    std::map<std::vector<std::size_t>, long long> merged;
    for (const EdgeSpec& spec : edges) {
      if (spec.weight < 1) throw InputError("edge weights must be positive integers");
      std::vector<std::size_t> vs;
      for (const auto& id : spec.vertices) vs.push_back(index_of(id));
      std::sort(vs.begin(), vs.end());
      if (std::adjacent_find(vs.begin(), vs.end()) != vs.end()) {
        throw InputError("edge lists a vertex twice");
      }
      if (vs.size() < 2) throw InputError("edges need at least two vertices");
      merged[vs] += spec.weight;
    }
    for (auto& [vs, w] : merged) edges_.push_back({vs, w});

    if (terminals.empty()) throw InputError("terminal set must be nonempty");
    for (const auto& id : terminals) terminal_mask_ |= VertexMask{1} << index_of(id);
    for (std::size_t i = 0; i < ids_.size(); ++i) {
      if (terminal_mask_ >> i & 1) terminals_.push_back(i);
    }
    for (const auto& e : edges_) {
      VertexMask m = 0;
      for (auto v : e.vertices) m |= VertexMask{1} << v;
      edge_masks_.push_back(m);
    }
  }

  std::size_t vertex_count() const { return ids_.size(); }
  const std::vector<std::string>& vertex_ids() const { return ids_; }
  const std::vector<Hyperedge>& edges() const { return edges_; }
  /// Terminal vertex indices in ascending order.
  const std::vector<std::size_t>& terminals() const { return terminals_; }
  std::size_t terminal_count() const { return terminals_.size(); }
  VertexMask terminal_mask() const { return terminal_mask_; }
  VertexMask all_vertices() const {
    return ids_.size() == 64 ? ~VertexMask{0} : (VertexMask{1} << ids_.size()) - 1;
  }
  VertexMask edge_mask(std::size_t e) const { return edge_masks_[e]; }
  bool is_terminal(std::size_t v) const { return terminal_mask_ >> v & 1; }

  std::size_t index_of(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw InputError("unknown vertex id '" + id + "'");
    return it->second;
  }

  VertexMask mask_of(const std::vector<std::string>& ids) const {
    VertexMask m = 0;
    for (const auto& id : ids) m |= VertexMask{1} << index_of(id);
    return m;
  }

  /// Sum of weights of edges containing v.
  long long weighted_degree(std::size_t v) const {
    long long d = 0;
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      if (edge_masks_[e] >> v & 1) d += edges_[e].weight;
    }
    return d;
  }

  /// Vertex subset whose terminal part is A and with no non-terminals.
  VertexMask expand_terminals(TerminalMask a) const {
    VertexMask m = 0;
    for (std::size_t i = 0; i < terminals_.size(); ++i) {
      if (a >> i & 1) m |= VertexMask{1} << terminals_[i];
    }
    return m;
  }

  TerminalMask terminal_part(VertexMask s) const {
    TerminalMask a = 0;
    for (std::size_t i = 0; i < terminals_.size(); ++i) {
      if (s >> terminals_[i] & 1) a |= TerminalMask{1} << i;
    }
    return a;
  }

  /// Sorted vertex ids of a subset, as used in files and reports.
  std::vector<std::string> ids_of(VertexMask s) const {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < ids_.size(); ++i) {
      if (s >> i & 1) out.push_back(ids_[i]);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  friend bool operator==(const WeightedHypergraph& a, const WeightedHypergraph& b) {
    return a.ids_ == b.ids_ && a.edges_ == b.edges_ && a.terminal_mask_ == b.terminal_mask_;
  }

 private:
  std::vector<std::string> ids_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<Hyperedge> edges_;
  std::vector<VertexMask> edge_masks_;
  std::vector<std::size_t> terminals_;
  VertexMask terminal_mask_ = 0;
};

/// c(S): total weight of edges with vertices both inside and outside S.
inline long long cut_value(const WeightedHypergraph& h, VertexMask s) {
  if (s & ~h.all_vertices()) throw InputError("cut_value: subset contains unknown vertices");
  long long c = 0;
  for (std::size_t e = 0; e < h.edges().size(); ++e) {
    const VertexMask inside = s & h.edge_mask(e);
    if (inside != 0 && inside != h.edge_mask(e)) c += h.edges()[e].weight;
  }
  return c;
}

inline long long cut_value(const WeightedHypergraph& h, const std::vector<std::string>& s) {
  return cut_value(h, h.mask_of(s));
}

/// Drops every connected component that contains no terminal. Vertex order
/// of the survivors is preserved.
inline WeightedHypergraph prune_floating_components(const WeightedHypergraph& h) {
  const std::size_t n = h.vertex_count();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& e : h.edges()) {
    for (std::size_t i = 1; i < e.vertices.size(); ++i) {
      parent[find(e.vertices[i])] = find(e.vertices[0]);
    }
  }
  std::vector<bool> anchored(n, false);
  for (auto t : h.terminals()) anchored[find(t)] = true;

  std::vector<std::string> keep;
  for (std::size_t v = 0; v < n; ++v) {
    if (anchored[find(v)]) keep.push_back(h.vertex_ids()[v]);
  }
  std::vector<WeightedHypergraph::EdgeSpec> edges;
  for (const auto& e : h.edges()) {
    if (!anchored[find(e.vertices[0])]) continue;
    WeightedHypergraph::EdgeSpec spec{{}, e.weight};
    for (auto v : e.vertices) spec.vertices.push_back(h.vertex_ids()[v]);
    edges.push_back(std::move(spec));
  }
  std::vector<std::string> terminals;
  for (auto t : h.terminals()) terminals.push_back(h.vertex_ids()[t]);
  return WeightedHypergraph(std::move(keep), edges, terminals);
}

inline bool is_pruned(const WeightedHypergraph& h) {
  return prune_floating_components(h).vertex_count() == h.vertex_count();
}

/// m(A) and the number k(A) of cuts attaining it, for every A subset of T.
class MinCutTable {
 public:
  MinCutTable(std::size_t terminals, std::vector<long long> values, std::vector<std::uint64_t> counts)
      : terminals_(terminals), values_(std::move(values)), counts_(std::move(counts)) {}

  std::size_t terminal_count() const { return terminals_; }
  std::size_t size() const { return values_.size(); }
  long long min_cut(TerminalMask a) const { return values_.at(a); }
  std::uint64_t count(TerminalMask a) const { return counts_.at(a); }
  const std::vector<long long>& values() const { return values_; }
  const std::vector<std::uint64_t>& counts() const { return counts_; }

  friend bool operator==(const MinCutTable&, const MinCutTable&) = default;

 private:
  std::size_t terminals_;
  std::vector<long long> values_;
  std::vector<std::uint64_t> counts_;
};

/// Exhaustive min-cut table: one sweep over all 2^|V| vertex subsets,
/// bucketed by their terminal part. Requires a pruned hypergraph so that
/// S = {} is the unique zero cut for A = {}.
inline MinCutTable mincut_table(const WeightedHypergraph& h,
                                std::size_t max_vertices = kDefaultEnumerationBound) {
  if (h.vertex_count() > max_vertices) {
    throw CapacityError("min-cut enumeration over " + std::to_string(h.vertex_count()) +
                        " vertices exceeds the bound of " + std::to_string(max_vertices));
  }
  if (!is_pruned(h)) {
    throw InputError("mincut_table: hypergraph has components without terminals; prune it first");
  }
  const std::size_t n = h.terminal_count();
  const std::size_t subsets = std::size_t{1} << n;
  const VertexMask inner = h.all_vertices() & ~h.terminal_mask();
  std::vector<long long> best(subsets, std::numeric_limits<long long>::max());
  std::vector<std::uint64_t> count(subsets, 0);
  for (TerminalMask a = 0; a < subsets; ++a) {
    const VertexMask base = h.expand_terminals(a);
    // Enumerate all subsets of the non-terminal vertices.
    VertexMask sub = 0;
    do {
      const long long c = cut_value(h, base | sub);
      if (c < best[a]) {
        best[a] = c;
        count[a] = 1;
      } else if (c == best[a]) {
        ++count[a];
      }
      sub = (sub - inner) & inner;
    } while (sub != 0);
  }
  return MinCutTable(n, std::move(best), std::move(count));
}

}  // namespace hgstab
