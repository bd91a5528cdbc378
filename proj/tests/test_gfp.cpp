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

#include <boost/math/distributions/chi_squared.hpp>

#include <cmath>
#include <map>
#include <random>
#include <vector>

#include "hgstab/gfp.hpp"

namespace hgstab {
namespace {

TEST(PrimeModulus, RejectsComposites) {
  EXPECT_THROW(PrimeModulus(1), InputError);
  EXPECT_THROW(PrimeModulus(4), InputError);
  EXPECT_THROW(PrimeModulus(9), InputError);
  EXPECT_THROW(PrimeModulus(257), InputError);
  for (int p : {2, 3, 5, 7, 251}) EXPECT_NO_THROW(PrimeModulus{p});
}

TEST(PrimeModulus, Inverses) {
  for (int p : {2, 3, 5, 7, 11}) {
    PrimeModulus mod(p);
    for (int a = 1; a < p; ++a) EXPECT_EQ(mod.mul(a, mod.inv(a)), 1);
  }
}

TEST(Rank, Examples) {
  const PrimeModulus p2(2), p3(3);
  EXPECT_EQ(rank(FpMatrix::from_rows({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}, p2), p2), 3u);
  EXPECT_EQ(rank(FpMatrix(3, 4), p2), 0u);
  const auto m = FpMatrix::from_rows({{1, 1}, {2, 2}}, p3);
  const auto copy = m;
  EXPECT_EQ(rank(m, p3), 1u);
  EXPECT_EQ(m, copy);
}

TEST(Rank, InvariantUnderRowShuffleAndScaling) {
  std::mt19937_64 rng(3);
  for (int p : {2, 3, 5}) {
    PrimeModulus mod(p);
    for (int trial = 0; trial < 100; ++trial) {
      const std::size_t rows = 1 + rng() % 6, cols = 1 + rng() % 6;
      std::vector<std::vector<int>> data(rows, std::vector<int>(cols));
      for (auto& row : data) {
        for (auto& x : row) x = static_cast<int>(rng() % static_cast<unsigned>(p));
      }
      if (rows > 2) data[2] = data[0];  // force some dependence
      const auto base = rank(FpMatrix::from_rows(data, mod), mod);
      std::shuffle(data.begin(), data.end(), rng);
      for (auto& row : data) {
        const int s = 1 + static_cast<int>(rng() % static_cast<unsigned>(p - 1));
        for (auto& x : row) x = mod.mul(x, s);
      }
      EXPECT_EQ(rank(FpMatrix::from_rows(data, mod), mod), base);
    }
  }
}

TEST(SymplecticProduct, Examples) {
  const PrimeModulus p2(2), p3(3);
  const std::vector<Residue> x1{1, 0, 0, 0}, z1{0, 0, 1, 0}, z2{0, 0, 0, 1};
  EXPECT_EQ(symplectic_product(x1, z1, p2), 1);
  EXPECT_EQ(symplectic_product(x1, x1, p2), 0);
  EXPECT_EQ(symplectic_product(x1, z2, p3), 0);
  // Antisymmetry: <z1, x1> = -1.
  EXPECT_EQ(symplectic_product(z1, x1, p3), 2);
  EXPECT_THROW(symplectic_product(x1, std::vector<Residue>{1, 0}, p2), InputError);
}

void expect_isotropic_full_rank(const FpMatrix& l, const PrimeModulus& p) {
  ASSERT_EQ(rank(l, p), l.rows());
  for (std::size_t i = 0; i < l.rows(); ++i) {
    for (std::size_t j = 0; j < l.rows(); ++j) {
      ASSERT_EQ(symplectic_product(l.row(i), l.row(j), p), 0);
    }
  }
}

TEST(RandomLagrangian, IsotropicAndFullRankForEverySeed) {
  for (int p : {2, 3, 5}) {
    PrimeModulus mod(p);
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
      Rng rng(seed);
      const std::size_t m = 1 + seed % 4;
      const auto l = random_lagrangian(m, mod, rng);
      ASSERT_EQ(l.rows(), m);
      ASSERT_EQ(l.cols(), 2 * m);
      expect_isotropic_full_rank(l, mod);
    }
  }
}

TEST(RandomSymplectic, PreservesTheForm) {
  for (int p : {2, 3, 7}) {
    PrimeModulus mod(p);
    Rng rng(p);
    const std::size_t m = 4;
    const auto s = random_symplectic(m, mod, rng);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        // Rows 2i, 2i+1 are the images of X_i, Z_i.
        EXPECT_EQ(symplectic_product(s.row(2 * i), s.row(2 * j), mod), 0);
        EXPECT_EQ(symplectic_product(s.row(2 * i + 1), s.row(2 * j + 1), mod), 0);
        EXPECT_EQ(symplectic_product(s.row(2 * i), s.row(2 * j + 1), mod), i == j ? 1 : 0);
      }
    }
  }
}

// Number of Lagrangian subspaces of GF(p)^{2m}: prod_{i=1..m} (p^i + 1).
long long lagrangian_count(int p, int m) {
  long long c = 1, q = 1;
  for (int i = 1; i <= m; ++i) {
    q *= p;
    c *= q + 1;
  }
  return c;
}

// Frequencies of distinct Lagrangians, keyed by their reduced echelon form.
std::map<std::vector<Residue>, int> lagrangian_histogram(std::size_t m, int p, int samples,
                                                         std::uint64_t seed) {
  PrimeModulus mod(p);
  Rng rng(seed);
  std::map<std::vector<Residue>, int> counts;
  for (int i = 0; i < samples; ++i) {
    const auto r = row_reduce(random_lagrangian(m, mod, rng), mod);
    std::vector<Residue> key;
    for (std::size_t a = 0; a < r.rows(); ++a) {
      for (std::size_t b = 0; b < r.cols(); ++b) key.push_back(r(a, b));
    }
    ++counts[key];
  }
  return counts;
}

void expect_uniform(const std::map<std::vector<Residue>, int>& counts, long long classes,
                    int samples, bool per_class = true) {
  ASSERT_EQ(static_cast<long long>(counts.size()), classes);
  const double expected = static_cast<double>(samples) / static_cast<double>(classes);
  const double sigma = std::sqrt(expected * (1 - 1.0 / static_cast<double>(classes)));
  double chi2 = 0;
  for (const auto& [key, c] : counts) {
    chi2 += (c - expected) * (c - expected) / expected;
    if (per_class) {
      EXPECT_LE(std::abs(c - expected), 3 * sigma) << "class off by more than 3 sigma";
    }
  }
  boost::math::chi_squared dist(static_cast<double>(classes - 1));
  EXPECT_LT(chi2, boost::math::quantile(boost::math::complement(dist, 0.001)));
}

TEST(RandomLagrangian, UniformForOneQubit) {
  EXPECT_EQ(lagrangian_count(2, 1), 3);
  expect_uniform(lagrangian_histogram(1, 2, 30000, 17), 3, 30000);
}

TEST(RandomLagrangian, UniformForTwoQubits) {
  EXPECT_EQ(lagrangian_count(2, 2), 15);
  expect_uniform(lagrangian_histogram(2, 2, 100000, 18), 15, 100000);
}

TEST(RandomLagrangian, UniformForQutrits) {
  expect_uniform(lagrangian_histogram(1, 3, 40000, 19), lagrangian_count(3, 1), 40000, false);
  expect_uniform(lagrangian_histogram(2, 3, 100000, 20), lagrangian_count(3, 2), 100000, false);
}

}  // namespace
}  // namespace hgstab
