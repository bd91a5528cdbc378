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

#include <cmath>
#include <vector>

#include "hgstab/experiments.hpp"
#include "hgstab/io.hpp"
#include "test_support.hpp"

namespace hgstab {
namespace {

using testing::h1;

constexpr TerminalMask kA = 1, kB = 2, kC = 4;

TEST(Statistics, PairwiseSumAndSummary) {
  std::vector<double> xs(1000, 0.1);
  EXPECT_NEAR(pairwise_sum(xs), 100.0, 1e-12);
  const std::vector<double> ys = {1, 2, 3, 4};
  const auto s = summarize(ys);
  EXPECT_DOUBLE_EQ(s.mean, 2.5);
  EXPECT_NEAR(s.se, std::sqrt(5.0 / 3.0 / 4.0), 1e-15);
  EXPECT_EQ(z_score({1.0, 0.0}, 1.0), 0.0);
  EXPECT_TRUE(std::isinf(z_score({1.5, 0.0}, 1.0)));
  EXPECT_DOUBLE_EQ(z_score({1.5, 0.25}, 1.0), 2.0);
}

TEST(IntPow, Exact) {
  EXPECT_EQ(int_pow(2, 10), 1024.0);
  EXPECT_EQ(int_pow(3, 0), 1.0);
  EXPECT_EQ(int_pow(2, -3), 0.125);
  EXPECT_EQ(int_pow(3, 30), 205891132094649.0);
}

TEST(ExactSecondMoment, H1Values) {
  EXPECT_EQ(to_string(exact_second_moment(h1(), 2, 1, kC)), "1/20");
  EXPECT_EQ(to_string(exact_second_moment(h1(), 2, 1, 0)), "1/16");
}

TEST(ExactSecondMoment, AgreesWithDensePurities) {
  for (const auto& h : {h1(), testing::all_terminal()}) {
    for (int p : {2, 3}) {
      for (TerminalMask a = 0; a < 8; ++a) {
        const double exact = to_double(exact_second_moment(h, p, 1, a));
        EXPECT_NEAR(exact, testing::purity_route(h, p, 1, a), 1e-12 * std::max(1.0, exact));
      }
    }
  }
  EXPECT_NEAR(to_double(exact_second_moment(h1(), 2, 2, kA | kB)), testing::purity_route(h1(), 2, 2, kA | kB),
              1e-14);
}

TEST(ExactSecondMoment, NoBulkVerticesIsPurityOfOmega) {
  const auto h = testing::all_terminal();
  // c({a}) = 3 -> 2^{-3}; c({c}) = 2 -> 9^{-2}.
  EXPECT_EQ(to_string(exact_second_moment(h, 2, 1, kA)), "1/8");
  EXPECT_EQ(to_string(exact_second_moment(h, 3, 2, kC)), "1/81");
}

TEST(ExactSecondMoment, Errors) {
  EXPECT_THROW(exact_second_moment(h1(), 2, 1, 8), InputError);
  EXPECT_THROW(exact_second_moment(h1(), 2, 1, 0, 3), CapacityError);
}

TEST(NormalizedSecondMoment, TendsToMinCutCount) {
  const auto table = mincut_table(h1());
  for (TerminalMask a = 0; a < 8; ++a) {
    double previous = INFINITY;
    for (int r = 1; r <= 6; ++r) {
      const double ratio = to_double(normalized_second_moment(h1(), 2, r, a));
      const double err = std::abs(ratio - static_cast<double>(table.count(a)));
      EXPECT_LE(err, previous) << "A " << a << " r " << r;
      previous = err;
    }
    EXPECT_LT(previous, 0.1);
  }
}

TEST(ExperimentConfig, Validation) {
  ExperimentConfig c{h1()};
  EXPECT_NO_THROW(c.validate());
  auto bad = c;
  bad.prime = 4;
  EXPECT_THROW(bad.validate(), InputError);
  bad = c;
  bad.trials = 0;
  EXPECT_THROW(bad.validate(), InputError);
  bad = c;
  bad.delta = 0;
  EXPECT_THROW(bad.validate(), InputError);
  bad = c;
  bad.bond_exponents = {2, 1};
  EXPECT_THROW(bad.validate(), InputError);
  bad.bond_exponents = {};
  EXPECT_THROW(bad.validate(), InputError);
}

TEST(EstimateMoments, H1WithinFiveStandardErrors) {
  for (int p : {2, 3}) {
    ExperimentConfig c{h1()};
    c.prime = p;
    c.trials = 20000;
    c.seed = 3;
    const auto reports = estimate_moments(c);
    ASSERT_EQ(reports.size(), 1u);
    EXPECT_LE(std::abs(reports[0].first_z), 5.0);
    ASSERT_EQ(reports[0].second.size(), 8u);
    for (const auto& row : reports[0].second) EXPECT_LE(std::abs(row.z), 5.0) << row.subset;
  }
}

TEST(EstimateMoments, NoBulkVerticesIsExact) {
  ExperimentConfig c{testing::all_terminal()};
  c.trials = 10;
  const auto reports = estimate_moments(c);
  EXPECT_EQ(reports[0].first.mean, 1.0);
  EXPECT_EQ(reports[0].first.se, 0.0);
  for (const auto& row : reports[0].second) EXPECT_EQ(row.z, 0.0);
}

TEST(VerifyEntropyVectors, DetectsCorruption) {
  const auto [layout, omega] = build_omega(h1(), PrimeModulus(2), 2);
  auto trials = run_trials(layout, omega, 50, 9, 2, 1);
  EXPECT_EQ(verify_entropy_vectors(trials, 3).violating, 0u);
  for (auto& t : trials) {
    if (t.nonzero) {
      t.entropy[kA] += 1;  // breaks S(A) = S(BC)
      break;
    }
  }
  const auto audit = verify_entropy_vectors(trials, 3);
  EXPECT_EQ(audit.violating, 1u);
  ASSERT_TRUE(audit.first_violating_seed.has_value());
}

TEST(RankBound, CountsViolations) {
  const auto table = mincut_table(h1());
  TrialResult t;
  t.nonzero = true;
  t.entropy = {0, 1, 1, 2, 1, 1, 1, 0};
  EXPECT_EQ(rank_bound_violations(std::vector<TrialResult>{t}, table, 1), 1u);  // {a,b}: 2 > 1
  t.entropy[3] = 1;
  EXPECT_EQ(rank_bound_violations(std::vector<TrialResult>{t}, table, 1), 0u);
}

TEST(Concentration, SummaryOfCraftedTrials) {
  const auto layout = build_omega(h1(), PrimeModulus(2), 2).first;
  const auto table = mincut_table(h1());
  // m = {0,1,1,1,1,1,1,0}; at r = 2 exact saturation is {0,2,2,2,2,2,2,0}.
  TrialResult good{true, 0, {0, 2, 2, 2, 2, 2, 2, 0}, 1};
  TrialResult off{true, 0, {0, 2, 2, 2, 1, 2, 2, 0}, 2};  // |1/2 - 1| > 0.3
  TrialResult zero{false, 0, {}, 3};
  const std::vector<TrialResult> trials = {good, off, zero, good};
  const auto row = summarize_concentration(layout, table, trials, 0.3);
  EXPECT_EQ(row.nonzero, 3u);
  EXPECT_DOUBLE_EQ(row.p_nonzero.mean, 0.75);
  EXPECT_DOUBLE_EQ(row.success.mean, 0.5);
  EXPECT_DOUBLE_EQ(row.gaps[kC].gap.mean, 1.0 / 3.0);
  EXPECT_NEAR(row.gaps[kC].log_count, 1.0, 1e-15);  // k = 2
  EXPECT_EQ(row.seeds, (std::vector<std::uint64_t>{1, 2, 3, 1}));
  // At delta = 0.5 the half-off trial is an exact tie and counts.
  EXPECT_DOUBLE_EQ(summarize_concentration(layout, table, trials, 0.5).success.mean, 0.75);
}

TEST(Simulate, ByteIdenticalAcrossJobCounts) {
  ExperimentConfig c{testing::h2()};
  c.bond_exponents = {1, 2};
  c.trials = 300;
  c.seed = 11;
  std::string reference;
  for (std::size_t jobs : {1, 4, 8}) {
    c.jobs = jobs;
    const auto text = report_to_json(simulate(c)).dump(2);
    if (reference.empty()) {
      reference = text;
    } else {
      EXPECT_EQ(text, reference) << "jobs " << jobs;
    }
  }
}

TEST(Simulate, SeedChangesResults) {
  ExperimentConfig c{h1()};
  c.trials = 200;
  const auto a = report_to_json(simulate(c)).dump();
  c.seed = 1;
  EXPECT_NE(report_to_json(simulate(c)).dump(), a);
}

TEST(RunTrials, PropagatesErrors) {
  const auto [layout, omega] = build_omega(h1(), PrimeModulus(2), 1);
  auto broken = layout;
  broken.vertex_qudits[3].push_back(99);  // out of range qudit for vertex o
  EXPECT_ANY_THROW(run_trials(broken, omega, 16, 0, 1, 4));
}

}  // namespace
}  // namespace hgstab
