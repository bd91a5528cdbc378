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

#include <gtest/gtest.h>

#include <random>
#include <set>
#include <string>

#include "hgstab/experiments.hpp"
#include "hgstab/network.hpp"
#include "test_support.hpp"

namespace hgstab {
namespace {

using testing::h1;
using testing::reference_cut;

std::set<std::string> vertex_set(const WeightedHypergraph& h, VertexMask s) {
  std::set<std::string> out;
  for (std::size_t v = 0; v < h.vertex_count(); ++v) {
    if (s >> v & 1) out.insert(h.vertex_ids()[v]);
  }
  return out;
}

TEST(BuildOmega, QuditCounts) {
  const PrimeModulus p(2);
  EXPECT_EQ(build_omega(h1(), p, 1).first.qudit_count(), 5u);
  EXPECT_EQ(build_omega(h1(), p, 2).first.qudit_count(), 10u);
  EXPECT_EQ(build_omega(testing::h2(), p, 1).first.qudit_count(), 13u);
  EXPECT_EQ(build_omega(testing::h3(), p, 1).first.qudit_count(), 12u);
}

TEST(BuildOmega, LocalDimensionIsWeightedDegree) {
  for (const auto& [name, h] : testing::benchmarks()) {
    for (int r : {1, 3}) {
      const auto layout = build_omega(h, PrimeModulus(3), r).first;
      long long bulk = 0;
      for (std::size_t v = 0; v < h.vertex_count(); ++v) {
        EXPECT_EQ(layout.log_local_dimension(v), r * h.weighted_degree(v)) << name;
        if (!h.is_terminal(v)) bulk += r * h.weighted_degree(v);
      }
      EXPECT_EQ(layout.log_bulk_dimension(), bulk);
    }
  }
  // D_b = 4 for H1 at p = 2, r = 1.
  EXPECT_EQ(build_omega(h1(), PrimeModulus(2), 1).first.log_bulk_dimension(), 2);
}

TEST(BuildOmega, SiteLayoutIsEdgeMajor) {
  const auto layout = build_omega(h1(), PrimeModulus(2), 2).first;
  // e1 = {a,b,o} first (two copies), then e2 = {c,o}.
  const auto& h = layout.hypergraph;
  std::vector<std::string> expected = {"a", "b", "o", "a", "b", "o", "c", "o", "c", "o"};
  ASSERT_EQ(layout.sites.size(), expected.size());
  for (std::size_t q = 0; q < expected.size(); ++q) {
    EXPECT_EQ(h.vertex_ids()[layout.sites[q].vertex], expected[q]) << q;
  }
  EXPECT_EQ(layout.sites[4].copy, 1u);
  EXPECT_EQ(layout.sites[6].edge, 1u);
}

TEST(OmegaEntropy, EqualsBondExponentTimesCutEverywhere) {
  for (const auto& [name, h] : testing::benchmarks()) {
    for (int p : {2, 3}) {
      for (int r : {1, 2, 3}) {
        const auto [layout, omega] = build_omega(h, PrimeModulus(p), r);
        for (VertexMask s = 0; s <= h.all_vertices(); ++s) {
          ASSERT_EQ(omega_entropy(layout, omega, s), r * reference_cut(h, vertex_set(h, s)))
              << name << " p=" << p << " r=" << r << " S=" << s;
        }
      }
    }
  }
}

TEST(OmegaEntropy, RandomHypergraphs) {
  std::mt19937_64 rng(77);
  for (int i = 0; i < 25; ++i) {
    const auto h = testing::random_hypergraph(rng, 7, 4, 2);
    const auto [layout, omega] = build_omega(h, PrimeModulus(2), 1);
    for (VertexMask s = 0; s <= h.all_vertices(); ++s) {
      ASSERT_EQ(omega_entropy(layout, omega, s), reference_cut(h, vertex_set(h, s)));
    }
  }
}

TEST(BuildOmega, Preconditions) {
  const PrimeModulus p(2);
  EXPECT_THROW(build_omega(h1(), p, 0), InputError);
  EXPECT_THROW(build_omega(h1(), p, 1, 4), CapacityError);
  EXPECT_NO_THROW(build_omega(h1(), p, 1, 5));

  const WeightedHypergraph floating({"a", "b", "x", "y"}, {{{"a", "b"}, 1}, {{"x", "y"}, 1}},
                                    {"a", "b"});
  EXPECT_THROW(build_omega(floating, p, 1), InputError);

  std::vector<std::string> ids;
  std::vector<WeightedHypergraph::EdgeSpec> edges;
  for (int i = 0; i < 9; ++i) {
    ids.push_back("t" + std::to_string(i));
    if (i > 0) edges.push_back({{ids[0], ids.back()}, 1});
  }
  EXPECT_THROW(build_omega(WeightedHypergraph(ids, edges, ids), p, 1), CapacityError);
}

TEST(RunTrial, NoBulkVerticesKeepsOmega) {
  const auto h = testing::all_terminal();
  for (int r : {1, 2}) {
    const auto [layout, omega] = build_omega(h, PrimeModulus(3), r);
    const auto t = run_trial(layout, omega, 5);
    ASSERT_TRUE(t.nonzero);
    EXPECT_EQ(t.free_count, 0);
    for (TerminalMask a = 0; a < 8; ++a) {
      EXPECT_EQ(t.entropy[a], r * cut_value(h, h.expand_terminals(a)));
    }
  }
}

TEST(RunTrial, DeterministicInSeed) {
  const auto [layout, omega] = build_omega(testing::h2(), PrimeModulus(2), 1);
  for (std::uint64_t seed : {0ull, 1ull, 12345ull}) {
    EXPECT_EQ(run_trial(layout, omega, seed), run_trial(layout, omega, seed));
  }
}

TEST(RunTrial, EntropiesRespectRankBoundAndAreValidVectors) {
  std::mt19937_64 rng(91);
  for (int i = 0; i < 20; ++i) {
    const auto h = testing::random_hypergraph(rng, 7, 4, 2);
    const auto table = mincut_table(h);
    for (int p : {2, 3}) {
      const auto [layout, omega] = build_omega(h, PrimeModulus(p), 1);
      const auto trials = run_trials(layout, omega, 40, 1000 + i, 1, 1);
      EXPECT_EQ(rank_bound_violations(trials, table, 1), 0u);
      EXPECT_EQ(verify_entropy_vectors(trials, h.terminal_count()).violating, 0u);
      for (const auto& t : trials) {
        if (t.nonzero) {
          EXPECT_EQ(t.entropy[0], 0);
        }
      }
    }
  }
}

TEST(ProjectNetwork, TargetCountMismatch) {
  const auto [layout, omega] = build_omega(h1(), PrimeModulus(2), 1);
  EXPECT_THROW(project_network(layout, omega, {}), InputError);
}

}  // namespace
}  // namespace hgstab
