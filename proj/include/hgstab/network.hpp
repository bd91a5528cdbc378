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
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hgstab/errors.hpp"
#include "hgstab/gfp.hpp"
#include "hgstab/hypergraph.hpp"
#include "hgstab/rng.hpp"
#include "hgstab/stabilizer.hpp"

namespace hgstab {

inline constexpr std::size_t kDefaultMaxQudits = 4096;
inline constexpr std::size_t kMaxNetworkTerminals = 8;

/// Where each GHZ leg of the network lives. Edge e contributes w(e) * r
/// copies of an |e|-party GHZ state; a bond of dimension D = p^r is r qudits.
struct NetworkLayout {
  struct Site {
    std::size_t vertex;
    std::size_t edge;
    std::size_t copy;  // in [0, w(e) * r)
  };

  WeightedHypergraph hypergraph;
  PrimeModulus prime;
  int bond_exponent;
  std::vector<Site> sites;                            // indexed by qudit
  std::vector<std::vector<std::size_t>> vertex_qudits;  // ascending, per vertex

  std::size_t qudit_count() const { return sites.size(); }

  /// log_p of D_x = dim H_x.
  long long log_local_dimension(std::size_t vertex) const {
    return static_cast<long long>(vertex_qudits.at(vertex).size());
  }

  /// log_p of D_b, the product of D_x over non-terminal vertices.
  long long log_bulk_dimension() const {
    long long total = 0;
    for (std::size_t v = 0; v < hypergraph.vertex_count(); ++v) {
      if (!hypergraph.is_terminal(v)) total += log_local_dimension(v);
    }
    return total;
  }

  std::vector<std::size_t> non_terminals() const {
    std::vector<std::size_t> out;
    for (std::size_t v = 0; v < hypergraph.vertex_count(); ++v) {
      if (!hypergraph.is_terminal(v)) out.push_back(v);
    }
    return out;
  }

  /// Qudits of all vertices in S, ascending.
  std::vector<std::size_t> qudits_of(VertexMask s) const {
    std::vector<std::size_t> out;
    for (std::size_t q = 0; q < sites.size(); ++q) {
      if (s >> sites[q].vertex & 1) out.push_back(q);
    }
    return out;
  }
};

/// The GHZ network state Omega = (x)_e GHZ(e)^{(x) w(e) r} and its layout.
inline std::pair<NetworkLayout, StabilizerTableau> build_omega(
    const WeightedHypergraph& h, const PrimeModulus& p, int bond_exponent,
    std::size_t max_qudits = kDefaultMaxQudits) {
  if (bond_exponent < 1) throw InputError("bond exponent must be at least 1");
  if (!is_pruned(h)) throw InputError("build_omega: prune components without terminals first");
  if (h.terminal_count() > kMaxNetworkTerminals) {
    throw CapacityError("networks support at most 8 terminals");
  }
  long long total = 0;
  for (const auto& e : h.edges()) {
    total += e.weight * bond_exponent * static_cast<long long>(e.vertices.size());
  }
  if (total > static_cast<long long>(max_qudits)) {
    throw CapacityError("network needs " + std::to_string(total) + " qudits; bound is " +
                        std::to_string(max_qudits));
  }

  NetworkLayout layout{h, p, bond_exponent, {}, std::vector<std::vector<std::size_t>>(h.vertex_count())};
  const std::size_t n = static_cast<std::size_t>(total);
  FpMatrix g(n, 2 * n);
  std::size_t next = 0;
  for (std::size_t e = 0; e < h.edges().size(); ++e) {
    const auto& edge = h.edges()[e];
    const std::size_t copies = static_cast<std::size_t>(edge.weight * bond_exponent);
    const StabilizerTableau ghz = ghz_tableau(edge.vertices.size(), p);
    const std::size_t k = edge.vertices.size();
    for (std::size_t c = 0; c < copies; ++c) {
      for (std::size_t r = 0; r < k; ++r) {
        for (std::size_t j = 0; j < k; ++j) {
          g(next + r, next + j) = ghz.generators()(r, j);
          g(next + r, n + next + j) = ghz.generators()(r, k + j);
        }
      }
      for (std::size_t j = 0; j < k; ++j) {
        layout.sites.push_back({edge.vertices[j], e, c});
        layout.vertex_qudits[edge.vertices[j]].push_back(next + j);
      }
      next += k;
    }
  }
  auto omega = StabilizerTableau::trusted(p, std::move(g), std::vector<PhaseExponent>(n, 0));
  return {std::move(layout), std::move(omega)};
}

/// Entropy of Omega on the qudits of S, in units of log p (equals r * c(S)).
inline long long omega_entropy(const NetworkLayout& layout, const StabilizerTableau& omega,
                               VertexMask s) {
  if (s & ~layout.hypergraph.all_vertices()) throw InputError("omega_entropy: unknown vertices");
  const auto qudits = layout.qudits_of(s);
  return reduced_entropy(omega, qudits);
}

/// Outcome of one random projection of all non-terminal vertices.
struct TrialResult {
  bool nonzero = false;
  long long free_count = 0;          // tr[Psi] = p^{-free_count} when nonzero
  std::vector<long long> entropy;    // indexed by TerminalMask, units of log p
  std::uint64_t seed = 0;

  friend bool operator==(const TrialResult&, const TrialResult&) = default;
};

/// Random target states phi_x for the non-terminal vertices, in vertex
/// order. All targets are drawn before any projection so that every engine
/// replaying a seed sees the same states.
template <class URBG>
std::vector<StabilizerTableau> sample_targets(const NetworkLayout& layout, URBG& rng) {
  std::vector<StabilizerTableau> out;
  for (auto v : layout.non_terminals()) {
    const std::size_t m = layout.vertex_qudits[v].size();
    if (m == 0) {
      out.push_back(StabilizerTableau::empty(layout.prime));
    } else {
      out.push_back(sample_random_stabilizer(m, layout.prime, rng));
    }
  }
  return out;
}

/// Projects Omega onto the given targets (one per non-terminal vertex).
/// On success returns the state on the terminal qudits, which keep their
/// original relative order.
inline ProjectionOutcome project_network(const NetworkLayout& layout,
                                         const StabilizerTableau& omega,
                                         const std::vector<StabilizerTableau>& targets) {
  const auto bulk = layout.non_terminals();
  if (targets.size() != bulk.size()) throw InputError("one target per non-terminal vertex");
  std::vector<std::size_t> live(layout.qudit_count());
  std::iota(live.begin(), live.end(), 0);
  ProjectionOutcome acc{omega, 0};
  for (std::size_t i = 0; i < bulk.size(); ++i) {
    const auto& group = layout.vertex_qudits[bulk[i]];
    if (group.empty()) continue;
    std::vector<std::size_t> positions;
    for (auto q : group) {
      positions.push_back(static_cast<std::size_t>(
          std::lower_bound(live.begin(), live.end(), q) - live.begin()));
    }
    ProjectionOutcome step = project_onto_stabilizer(*acc.state, positions, targets[i]);
    if (step.is_zero()) return {std::nullopt, acc.free_count + step.free_count};
    acc.state = std::move(step.state);
    acc.free_count += step.free_count;
    std::vector<std::size_t> kept;
    std::size_t j = 0;
    for (auto q : live) {
      while (j < group.size() && group[j] < q) ++j;
      if (j < group.size() && group[j] == q) continue;
      kept.push_back(q);
    }
    live = std::move(kept);
  }
  return acc;
}

/// Entropies of the terminal state for every A subset of T.
inline std::vector<long long> terminal_entropies(const NetworkLayout& layout,
                                                 const StabilizerTableau& terminal_state) {
  const auto& h = layout.hypergraph;
  // Terminal qudits in ascending original order are the columns of the state.
  std::vector<std::size_t> terminal_qudits = layout.qudits_of(h.terminal_mask());
  std::vector<std::size_t> position(layout.qudit_count(), 0);
  for (std::size_t i = 0; i < terminal_qudits.size(); ++i) position[terminal_qudits[i]] = i;

  const std::size_t subsets = std::size_t{1} << h.terminal_count();
  std::vector<long long> out(subsets, 0);
  for (TerminalMask a = 0; a < subsets; ++a) {
    std::vector<std::size_t> sites;
    for (auto q : layout.qudits_of(h.expand_terminals(a))) sites.push_back(position[q]);
    out[a] = reduced_entropy(terminal_state, sites);
  }
  return out;
}

/// One random-projection trial driven entirely by `seed`.
inline TrialResult run_trial(const NetworkLayout& layout, const StabilizerTableau& omega,
                             std::uint64_t seed) {
  Rng rng(seed);
  const auto targets = sample_targets(layout, rng);
  ProjectionOutcome outcome = project_network(layout, omega, targets);
  TrialResult result;
  result.seed = seed;
  if (outcome.is_zero()) return result;
  result.nonzero = true;
  result.free_count = outcome.free_count;
  result.entropy = terminal_entropies(layout, *outcome.state);
  return result;
}

}  // namespace hgstab
