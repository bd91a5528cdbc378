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

// Dense state-vector model used to cross-check the stabilizer engine on
// small instances. Basis index = sum_q j_q p^q (qudit 0 least significant).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hgstab/errors.hpp"
#include "hgstab/network.hpp"
#include "hgstab/stabilizer.hpp"

namespace hgstab {

inline constexpr std::size_t kMaxDenseDimension = std::size_t{1} << 20;

using Amplitude = std::complex<double>;

struct DenseState {
  int p = 2;
  std::size_t n = 0;
  std::vector<Amplitude> amplitudes;  // length p^n

  double norm_squared() const {
    double s = 0;
    for (const auto& a : amplitudes) s += std::norm(a);
    return s;
  }
};

namespace detail {

inline std::size_t checked_dimension(int p, std::size_t n) {
  std::size_t dim = 1;
  for (std::size_t i = 0; i < n; ++i) {
    dim *= static_cast<std::size_t>(p);
    if (dim > kMaxDenseDimension) {
      throw CapacityError("dense state on " + std::to_string(n) + " qudits of dimension " +
                          std::to_string(p) + " exceeds 2^20 amplitudes");
    }
  }
  return dim;
}

inline std::vector<int> digits(std::size_t index, int p, std::size_t n) {
  std::vector<int> d(n);
  for (std::size_t q = 0; q < n; ++q) {
    d[q] = static_cast<int>(index % static_cast<std::size_t>(p));
    index /= static_cast<std::size_t>(p);
  }
  return d;
}

// out = g |in> for g = tau^s X^x Z^z.
inline void apply_pauli(const Pauli& g, int p, std::span<const Amplitude> in,
                        std::span<Amplitude> out) {
  const std::size_t n = g.num_qudits();
  const double two_pi = 2 * std::numbers::pi;
  const double tau_angle = p == 2 ? two_pi * g.phase() / 4.0 : two_pi * g.phase() / p;
  std::vector<std::size_t> stride(n);
  std::size_t s = 1;
  for (std::size_t q = 0; q < n; ++q) {
    stride[q] = s;
    s *= static_cast<std::size_t>(p);
  }
  std::fill(out.begin(), out.end(), Amplitude{0, 0});
  for (std::size_t idx = 0; idx < in.size(); ++idx) {
    if (in[idx] == Amplitude{0, 0}) continue;
    std::size_t rest = idx;
    std::size_t target = 0;
    long long zphase = 0;
    for (std::size_t q = 0; q < n; ++q) {
      const int j = static_cast<int>(rest % static_cast<std::size_t>(p));
      rest /= static_cast<std::size_t>(p);
      zphase += static_cast<long long>(g.z(q)) * j;
      target += static_cast<std::size_t>((j + g.x(q)) % p) * stride[q];
    }
    const double angle = tau_angle + two_pi * static_cast<double>(zphase % p) / p;
    out[target] += in[idx] * std::polar(1.0, angle);
  }
}

}  // namespace detail

/// The unit vector (up to global phase) stabilized by every generator of t,
/// obtained by applying the projectors (1/p) sum_k g^k to a fixed
/// pseudo-random start vector.
inline DenseState tableau_to_vector(const StabilizerTableau& t) {
  const int p = t.prime().value();
  const std::size_t n = t.num_qudits();
  const std::size_t dim = detail::checked_dimension(p, n);
  DenseState out{p, n, std::vector<Amplitude>(dim)};
  std::mt19937_64 rng(0x5eed);
  std::normal_distribution<double> normal;
  for (auto& a : out.amplitudes) a = {normal(rng), normal(rng)};

  std::vector<Amplitude> power(dim);
  std::vector<Amplitude> next(dim);
  std::vector<Amplitude> acc(dim);
  for (std::size_t r = 0; r < n; ++r) {
    const Pauli g = t.generator(r);
    acc = out.amplitudes;
    power = out.amplitudes;
    for (int k = 1; k < p; ++k) {
      detail::apply_pauli(g, p, power, next);
      std::swap(power, next);
      for (std::size_t i = 0; i < dim; ++i) acc[i] += power[i];
    }
    for (std::size_t i = 0; i < dim; ++i) out.amplitudes[i] = acc[i] / static_cast<double>(p);
  }
  const double norm = std::sqrt(out.norm_squared());
  if (norm < 1e-8) throw InvariantError("tableau_to_vector: generators stabilize no vector");
  for (auto& a : out.amplitudes) a /= norm;
  // Verify: each generator fixes the vector.
  for (std::size_t r = 0; r < n; ++r) {
    detail::apply_pauli(t.generator(r), p, out.amplitudes, next);
    for (std::size_t i = 0; i < dim; ++i) {
      if (std::abs(next[i] - out.amplitudes[i]) > 1e-9) {
        throw InvariantError("tableau_to_vector: inconsistent tableau");
      }
    }
  }
  return out;
}

/// Contracts <target| against `sites` of `state`; the remaining qudits keep
/// their relative order. The result is not normalized.
inline DenseState dense_project(const DenseState& state, std::span<const std::size_t> sites,
                                const DenseState& target) {
  if (state.p != target.p || sites.size() != target.n) {
    throw InputError("dense_project: dimension mismatch");
  }
  const int p = state.p;
  std::vector<bool> projected(state.n, false);
  for (auto s : sites) {
    if (s >= state.n || projected[s]) throw InputError("dense_project: bad site list");
    projected[s] = true;
  }
  const std::size_t rest = state.n - sites.size();
  DenseState out{p, rest, std::vector<Amplitude>(detail::checked_dimension(p, rest))};
  for (std::size_t idx = 0; idx < state.amplitudes.size(); ++idx) {
    const auto d = detail::digits(idx, p, state.n);
    std::size_t t_index = 0;
    std::size_t t_stride = 1;
    for (auto s : sites) {
      t_index += static_cast<std::size_t>(d[s]) * t_stride;
      t_stride *= static_cast<std::size_t>(p);
    }
    std::size_t r_index = 0;
    std::size_t r_stride = 1;
    for (std::size_t q = 0; q < state.n; ++q) {
      if (projected[q]) continue;
      r_index += static_cast<std::size_t>(d[q]) * r_stride;
      r_stride *= static_cast<std::size_t>(p);
    }
    out.amplitudes[r_index] += std::conj(target.amplitudes[t_index]) * state.amplitudes[idx];
  }
  return out;
}

namespace detail {

// All eigenvalues of the normalized reduced state on `sites` (or of the
// complementary reduced state when that one is smaller; the nonzero spectra
// agree).
inline Eigen::VectorXd reduced_eigenvalues(const DenseState& state,
                                           std::span<const std::size_t> sites) {
  const double norm2 = state.norm_squared();
  if (norm2 < 1e-300) throw InputError("dense_entropy: entropy of the zero vector is undefined");
  const int p = state.p;
  std::vector<bool> in_a(state.n, false);
  for (auto s : sites) {
    if (s >= state.n) throw InputError("dense_entropy: site out of range");
    in_a[s] = true;
  }
  std::size_t na = 0;
  for (bool b : in_a) na += b;
  const std::size_t dim_a = checked_dimension(p, na);
  const std::size_t dim_b = checked_dimension(p, state.n - na);

  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim_a),
                                              static_cast<Eigen::Index>(dim_b));
  const double norm = std::sqrt(norm2);
  for (std::size_t idx = 0; idx < state.amplitudes.size(); ++idx) {
    const auto d = digits(idx, p, state.n);
    std::size_t ia = 0, ib = 0, sa = 1, sb = 1;
    for (std::size_t q = 0; q < state.n; ++q) {
      if (in_a[q]) {
        ia += static_cast<std::size_t>(d[q]) * sa;
        sa *= static_cast<std::size_t>(p);
      } else {
        ib += static_cast<std::size_t>(d[q]) * sb;
        sb *= static_cast<std::size_t>(p);
      }
    }
    m(static_cast<Eigen::Index>(ia), static_cast<Eigen::Index>(ib)) = state.amplitudes[idx] / norm;
  }
  const Eigen::MatrixXcd gram = dim_a <= dim_b ? Eigen::MatrixXcd(m * m.adjoint())
                                               : Eigen::MatrixXcd(m.adjoint() * m);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(gram, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

}  // namespace detail

enum class EntropyOrder { kLogRank = 0, kVonNeumann = 1, kCollision = 2 };

inline constexpr double kEigenvalueCutoff = 1e-10;

/// Renyi entropy of order 0, 1 or 2 of the normalized reduced state on A,
/// in units of log p.
inline double dense_entropy(const DenseState& state, std::span<const std::size_t> sites,
                            EntropyOrder order) {
  const Eigen::VectorXd ev = detail::reduced_eigenvalues(state, sites);
  const double log_p = std::log(static_cast<double>(state.p));
  switch (order) {
    case EntropyOrder::kLogRank: {
      int r = 0;
      for (Eigen::Index i = 0; i < ev.size(); ++i) r += ev[i] > kEigenvalueCutoff;
      return std::log(static_cast<double>(r)) / log_p;
    }
    case EntropyOrder::kVonNeumann: {
      double s = 0;
      for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (ev[i] > kEigenvalueCutoff) s -= ev[i] * std::log(ev[i]);
      }
      return s / log_p;
    }
    case EntropyOrder::kCollision: {
      double purity = 0;
      for (Eigen::Index i = 0; i < ev.size(); ++i) purity += ev[i] * ev[i];
      return -std::log(purity) / log_p;
    }
  }
  return 0;
}

/// Nonzero eigenvalues (above the cutoff) of the normalized reduced state.
inline std::vector<double> dense_spectrum(const DenseState& state,
                                          std::span<const std::size_t> sites) {
  const Eigen::VectorXd ev = detail::reduced_eigenvalues(state, sites);
  std::vector<double> out;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev[i] > kEigenvalueCutoff) out.push_back(ev[i]);
  }
  return out;
}

/// Dense replay of one network trial: same targets, contracted one vertex
/// at a time in the same order as the stabilizer engine.
struct DenseTrial {
  bool nonzero = false;
  double trace = 0;  // squared norm of the projected vector
  DenseState terminal_state;
};

inline DenseTrial dense_replay(const NetworkLayout& layout, const DenseState& omega,
                               const std::vector<StabilizerTableau>& targets,
                               double zero_threshold = 1e-12) {
  const auto bulk = layout.non_terminals();
  std::vector<std::size_t> live(layout.qudit_count());
  std::iota(live.begin(), live.end(), 0);
  DenseState current = omega;
  for (std::size_t i = 0; i < bulk.size(); ++i) {
    const auto& group = layout.vertex_qudits[bulk[i]];
    if (group.empty()) continue;
    std::vector<std::size_t> positions;
    for (auto q : group) {
      positions.push_back(static_cast<std::size_t>(
          std::lower_bound(live.begin(), live.end(), q) - live.begin()));
    }
    current = dense_project(current, positions, tableau_to_vector(targets[i]));
    std::vector<std::size_t> kept;
    for (auto q : live) {
      if (!std::binary_search(group.begin(), group.end(), q)) kept.push_back(q);
    }
    live = std::move(kept);
  }
  DenseTrial out;
  out.trace = current.norm_squared();
  out.nonzero = out.trace > zero_threshold;
  out.terminal_state = std::move(current);
  return out;
}

/// Result of replaying trials through both engines.
struct OracleCheck {
  std::size_t trials = 0;
  std::size_t nonzero = 0;
  double max_trace_error = 0;
  double max_entropy_error = 0;
  std::optional<std::uint64_t> first_failing_seed;
  std::string failure;  // empty when every trial agreed

  bool passed() const { return !first_failing_seed.has_value(); }
};

inline constexpr double kOracleTolerance = 1e-9;

/// Replays trials 0..count-1 (seeds derive_seed(master, r, i), as in the
/// experiment harness) in the stabilizer and dense engines and compares the
/// ZERO flag, tr[Psi] and the order-0/1/2 entropies of every terminal subset.
/// `entropy_offset` is added to the stabilizer entropies; it exists only to
/// exercise the failure path.
inline OracleCheck oracle_check(const WeightedHypergraph& h, const PrimeModulus& p, int r,
                                std::size_t count, std::uint64_t master,
                                double entropy_offset = 0) {
  const auto [layout, omega] = build_omega(h, p, r);
  detail::checked_dimension(p.value(), layout.qudit_count());
  const DenseState dense_omega = tableau_to_vector(omega);

  // Column of each terminal qudit in the terminal state.
  const auto terminal_qudits = layout.qudits_of(h.terminal_mask());
  const std::size_t subsets = std::size_t{1} << h.terminal_count();
  std::vector<std::vector<std::size_t>> columns(subsets);
  for (TerminalMask a = 0; a < subsets; ++a) {
    const auto in_a = layout.qudits_of(h.expand_terminals(a));
    for (std::size_t j = 0; j < terminal_qudits.size(); ++j) {
      if (std::binary_search(in_a.begin(), in_a.end(), terminal_qudits[j])) {
        columns[a].push_back(j);
      }
    }
  }

  OracleCheck out;
  auto fail = [&](std::uint64_t seed, std::string what) {
    out.first_failing_seed = seed;
    out.failure = std::move(what);
  };
  for (std::size_t i = 0; i < count && out.passed(); ++i) {
    const std::uint64_t seed = derive_seed(master, static_cast<std::uint64_t>(r), i);
    ++out.trials;
    const TrialResult stab = run_trial(layout, omega, seed);
    Rng rng(seed);
    const DenseTrial dense = dense_replay(layout, dense_omega, sample_targets(layout, rng));
    if (stab.nonzero != dense.nonzero) {
      fail(seed, "ZERO flag disagrees");
      break;
    }
    if (!stab.nonzero) continue;
    ++out.nonzero;
    const double trace = std::pow(static_cast<double>(p.value()),
                                  -static_cast<double>(stab.free_count));
    const double trace_error = std::abs(trace - dense.trace);
    out.max_trace_error = std::max(out.max_trace_error, trace_error);
    if (trace_error > kOracleTolerance) {
      fail(seed, "tr[Psi] disagrees");
      break;
    }
    for (TerminalMask a = 0; a < subsets && out.passed(); ++a) {
      const double expected = static_cast<double>(stab.entropy[a]) + entropy_offset;
      for (auto order :
           {EntropyOrder::kLogRank, EntropyOrder::kVonNeumann, EntropyOrder::kCollision}) {
        const double err = std::abs(dense_entropy(dense.terminal_state, columns[a], order) - expected);
        out.max_entropy_error = std::max(out.max_entropy_error, err);
        if (err > kOracleTolerance) {
          fail(seed, "entropy of order " + std::to_string(static_cast<int>(order)) +
                         " disagrees on terminal subset " + std::to_string(a));
          break;
        }
      }
    }
  }
  return out;
}

}  // namespace hgstab
