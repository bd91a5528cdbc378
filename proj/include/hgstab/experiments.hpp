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

// Monte Carlo harness for random stabilizer tensor networks: moment
// estimates against exact enumeration, concentration statistics per bond
// exponent, and entropy-vector audits.

#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "hgstab/errors.hpp"
#include "hgstab/hypergraph.hpp"
#include "hgstab/network.hpp"
#include "hgstab/rng.hpp"
#include "hgstab/set_function.hpp"
#include "hgstab/stabilizer.hpp"

namespace hgstab {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

struct ExperimentConfig {
  WeightedHypergraph hypergraph;
  int prime = 2;
  std::vector<int> bond_exponents{1};
  std::size_t trials = 1000;
  std::uint64_t seed = 0;
  double delta = 0.3;
  std::size_t jobs = 1;  // 0 = all hardware threads

  void validate() const {
    PrimeModulus check(prime);
    (void)check;
    if (trials < 1) throw InputError("trials must be at least 1");
    if (!(delta > 0)) throw InputError("delta must be positive");
    if (bond_exponents.empty()) throw InputError("need at least one bond exponent");
    for (std::size_t i = 0; i < bond_exponents.size(); ++i) {
      if (bond_exponents[i] < 1) throw InputError("bond exponents must be positive");
      if (i > 0 && bond_exponents[i] <= bond_exponents[i - 1]) {
        throw InputError("bond exponents must be strictly ascending");
      }
    }
  }
};

// ---------------------------------------------------------------------------
// Deterministic statistics

/// Pairwise summation in a fixed tree over the index order.
inline double pairwise_sum(std::span<const double> xs) {
  if (xs.size() <= 8) {
    double s = 0;
    for (double x : xs) s += x;
    return s;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

struct SampleSummary {
  double mean = 0;
  double se = 0;  // standard error of the mean
};

inline SampleSummary summarize(std::span<const double> xs) {
  SampleSummary out;
  if (xs.empty()) return out;
  const double n = static_cast<double>(xs.size());
  out.mean = pairwise_sum(xs) / n;
  if (xs.size() < 2) return out;
  std::vector<double> dev(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) dev[i] = (xs[i] - out.mean) * (xs[i] - out.mean);
  out.se = std::sqrt(pairwise_sum(dev) / (n - 1) / n);
  return out;
}

/// (mean - expected) / se; zero-variance samples give 0 on exact agreement
/// and +-infinity otherwise.
inline double z_score(const SampleSummary& s, double expected) {
  const double diff = s.mean - expected;
  if (s.se > 0) return diff / s.se;
  if (std::abs(diff) <= 1e-12 * std::max(1.0, std::abs(expected))) return 0;
  return diff > 0 ? std::numeric_limits<double>::infinity()
                  : -std::numeric_limits<double>::infinity();
}

// ---------------------------------------------------------------------------
// Trials

inline std::size_t resolve_jobs(std::size_t jobs) {
  if (jobs != 0) return jobs;
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

/// Runs trials 0..count-1 with seeds derive_seed(master, stream, i). The
/// result vector is indexed by trial and independent of `jobs`.
inline std::vector<TrialResult> run_trials(const NetworkLayout& layout,
                                           const StabilizerTableau& omega, std::size_t count,
                                           std::uint64_t master, std::uint64_t stream,
                                           std::size_t jobs) {
  std::vector<TrialResult> results(count);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    try {
      for (std::size_t i = next++; i < count; i = next++) {
        results[i] = run_trial(layout, omega, derive_seed(master, stream, i));
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next = count;
    }
  };
  const std::size_t threads = std::min(resolve_jobs(jobs), std::max<std::size_t>(count, 1));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

// ---------------------------------------------------------------------------
// Exact second moment

inline BigInt big_pow(long long base, long long exponent) {
  BigInt out = 1;
  for (long long i = 0; i < exponent; ++i) out *= base;
  return out;
}

/// E tr[Psi_A^2] for 2-design projections, exactly:
///   prod_{x not in T} 1 / (D_x (D_x + 1)) * sum_{S : S & T = A} D^{-c(S)}
/// with D = p^r and D_x = D^{weighted degree of x}.
inline Rational exact_second_moment(const WeightedHypergraph& h, int p, int r, TerminalMask a,
                                    std::size_t max_vertices = kDefaultEnumerationBound) {
  if (h.vertex_count() > max_vertices) {
    throw CapacityError("exact second moment: too many vertices to enumerate");
  }
  if (a >= (TerminalMask{1} << h.terminal_count())) throw InputError("subset outside terminals");
  const BigInt d = big_pow(p, r);
  Rational prefactor = 1;
  for (std::size_t v = 0; v < h.vertex_count(); ++v) {
    if (h.is_terminal(v)) continue;
    const BigInt dx = big_pow(p, static_cast<long long>(r) * h.weighted_degree(v));
    prefactor /= Rational(dx * (dx + 1));
  }
  // Bucket cuts by value so each D^{-c} is formed once.
  std::vector<BigInt> by_cut;
  const VertexMask base = h.expand_terminals(a);
  const VertexMask inner = h.all_vertices() & ~h.terminal_mask();
  VertexMask sub = 0;
  do {
    const auto c = static_cast<std::size_t>(cut_value(h, base | sub));
    if (by_cut.size() <= c) by_cut.resize(c + 1, 0);
    by_cut[c] += 1;
    sub = (sub - inner) & inner;
  } while (sub != 0);
  Rational sum = 0;
  BigInt dc = 1;
  for (std::size_t c = 0; c < by_cut.size(); ++c) {
    if (by_cut[c] != 0) sum += Rational(by_cut[c], dc);
    dc *= d;
  }
  return prefactor * sum;
}

/// D_b^2 D^{m(A)} E tr[Psi_A^2], which tends to k_A as D grows.
inline Rational normalized_second_moment(const WeightedHypergraph& h, int p, int r,
                                         TerminalMask a) {
  const auto table = mincut_table(h);
  long long log_db = 0;
  for (std::size_t v = 0; v < h.vertex_count(); ++v) {
    if (!h.is_terminal(v)) log_db += static_cast<long long>(r) * h.weighted_degree(v);
  }
  const BigInt scale = big_pow(p, 2 * log_db + static_cast<long long>(r) * table.min_cut(a));
  return exact_second_moment(h, p, r, a) * Rational(scale);
}

/// p^k in double precision by repeated squaring; exact whenever the
/// result is a representable integer.
inline double int_pow(int p, long long k) {
  double base = k < 0 ? 1.0 / p : static_cast<double>(p);
  unsigned long long e = static_cast<unsigned long long>(k < 0 ? -k : k);
  double out = 1;
  for (; e > 0; e >>= 1) {
    if (e & 1) out *= base;
    base *= base;
  }
  return out;
}

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

inline std::string to_string(const Rational& q) {
  std::string out = boost::multiprecision::numerator(q).str();
  const BigInt den = boost::multiprecision::denominator(q);
  if (den != 1) out += "/" + den.str();
  return out;
}

// ---------------------------------------------------------------------------
// Moments

struct MomentRow {
  TerminalMask subset = 0;
  long long min_cut = 0;
  std::uint64_t min_cut_count = 0;
  SampleSummary scaled;   // of D_b^2 tr[Psi_A^2]
  Rational exact;         // E tr[Psi_A^2], unscaled
  double exact_scaled = 0;  // D_b^2 * exact
  double z = 0;
};

struct MomentReport {
  int prime = 2;
  int bond_exponent = 1;
  std::size_t trials = 0;
  long long log_bulk_dimension = 0;  // log_p D_b
  SampleSummary first;               // of D_b tr[Psi]; exact value 1
  double first_z = 0;
  std::vector<MomentRow> second;
};

/// Moment statistics of a finished batch of trials. ZERO outcomes enter as
/// tr[Psi] = tr[Psi_A^2] = 0.
inline MomentReport summarize_moments(const NetworkLayout& layout, const MinCutTable& table,
                                      std::span<const TrialResult> trials) {
  const auto& h = layout.hypergraph;
  const int p = layout.prime.value();
  const int r = layout.bond_exponent;
  MomentReport report;
  report.prime = p;
  report.bond_exponent = r;
  report.trials = trials.size();
  report.log_bulk_dimension = layout.log_bulk_dimension();

  std::vector<double> first(trials.size(), 0);
  for (std::size_t i = 0; i < trials.size(); ++i) {
    if (trials[i].nonzero) {
      first[i] = int_pow(p, report.log_bulk_dimension - trials[i].free_count);
    }
  }
  report.first = summarize(first);
  report.first_z = z_score(report.first, 1.0);

  const Rational db2(big_pow(p, 2 * report.log_bulk_dimension));
  std::vector<double> second(trials.size());
  for (TerminalMask a = 0; a < table.size(); ++a) {
    for (std::size_t i = 0; i < trials.size(); ++i) {
      second[i] = 0;
      if (!trials[i].nonzero) continue;
      second[i] = int_pow(p, 2 * report.log_bulk_dimension - 2 * trials[i].free_count -
                                 trials[i].entropy[a]);
    }
    MomentRow row;
    row.subset = a;
    row.min_cut = table.min_cut(a);
    row.min_cut_count = table.count(a);
    row.scaled = summarize(second);
    row.exact = exact_second_moment(h, p, r, a);
    row.exact_scaled = to_double(row.exact * db2);
    row.z = z_score(row.scaled, row.exact_scaled);
    report.second.push_back(std::move(row));
  }
  return report;
}

/// One moment report per bond exponent in the config.
inline std::vector<MomentReport> estimate_moments(const ExperimentConfig& config) {
  config.validate();
  const PrimeModulus p(config.prime);
  const auto table = mincut_table(config.hypergraph);
  std::vector<MomentReport> out;
  for (int r : config.bond_exponents) {
    const auto [layout, omega] = build_omega(config.hypergraph, p, r);
    const auto trials = run_trials(layout, omega, config.trials, config.seed,
                                   static_cast<std::uint64_t>(r), config.jobs);
    out.push_back(summarize_moments(layout, table, trials));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Concentration

struct GapRow {
  TerminalMask subset = 0;
  long long min_cut = 0;
  std::uint64_t min_cut_count = 0;
  SampleSummary gap;  // of r m(A) - S(Psi_A) over nonzero trials, units of log p
  double log_count = 0;  // log_p k_A
};

struct ConcentrationRow {
  int bond_exponent = 1;
  std::size_t trials = 0;
  std::size_t nonzero = 0;
  SampleSummary p_nonzero;
  SampleSummary success;  // nonzero and max_A |S/(r log p) - m(A)| <= delta
  std::vector<GapRow> gaps;
  std::size_t rank_bound_violations = 0;
  std::size_t entropy_vector_violations = 0;
  std::vector<std::uint64_t> seeds;
};

struct ConcentrationReport {
  int prime = 2;
  double delta = 0.3;
  std::vector<ConcentrationRow> rows;
};

/// Checks every nonzero trial's entropy vector for symmetry and
/// submodularity (exact integer arithmetic).
struct EntropyVectorAudit {
  std::size_t checked = 0;
  std::size_t violating = 0;
  std::optional<std::uint64_t> first_violating_seed;
};

inline EntropyVectorAudit verify_entropy_vectors(std::span<const TrialResult> trials,
                                                 std::size_t terminal_count) {
  EntropyVectorAudit audit;
  for (const auto& t : trials) {
    if (!t.nonzero) continue;
    ++audit.checked;
    if (!check_symmetric_submodular<long long>(t.entropy, terminal_count, 0).empty()) {
      ++audit.violating;
      if (!audit.first_violating_seed) audit.first_violating_seed = t.seed;
    }
  }
  return audit;
}

/// Count of (trial, A) pairs with S(Psi_A) > r m(A).
inline std::size_t rank_bound_violations(std::span<const TrialResult> trials,
                                         const MinCutTable& table, int r) {
  std::size_t out = 0;
  for (const auto& t : trials) {
    if (!t.nonzero) continue;
    for (TerminalMask a = 0; a < table.size(); ++a) {
      if (t.entropy[a] > r * table.min_cut(a)) ++out;
    }
  }
  return out;
}

inline ConcentrationRow summarize_concentration(const NetworkLayout& layout,
                                                const MinCutTable& table,
                                                std::span<const TrialResult> trials,
                                                double delta) {
  const int r = layout.bond_exponent;
  const double log_p = std::log(static_cast<double>(layout.prime.value()));
  ConcentrationRow row;
  row.bond_exponent = r;
  row.trials = trials.size();

  std::vector<double> nonzero(trials.size());
  std::vector<double> success(trials.size());
  for (std::size_t i = 0; i < trials.size(); ++i) {
    const auto& t = trials[i];
    row.seeds.push_back(t.seed);
    nonzero[i] = t.nonzero ? 1 : 0;
    if (!t.nonzero) continue;
    ++row.nonzero;
    double worst = 0;
    for (TerminalMask a = 0; a < table.size(); ++a) {
      const double dev = std::abs(static_cast<double>(t.entropy[a]) / r -
                                  static_cast<double>(table.min_cut(a)));
      worst = std::max(worst, dev);
    }
    // Entropies are integers over r; a tiny epsilon keeps exact ties inside.
    success[i] = worst <= delta + 1e-12 ? 1 : 0;
  }
  row.p_nonzero = summarize(nonzero);
  row.success = summarize(success);

  for (TerminalMask a = 0; a < table.size(); ++a) {
    std::vector<double> gaps;
    for (const auto& t : trials) {
      if (t.nonzero) gaps.push_back(static_cast<double>(r * table.min_cut(a) - t.entropy[a]));
    }
    GapRow g;
    g.subset = a;
    g.min_cut = table.min_cut(a);
    g.min_cut_count = table.count(a);
    g.gap = summarize(gaps);
    g.log_count = std::log(static_cast<double>(table.count(a))) / log_p;
    row.gaps.push_back(std::move(g));
  }
  row.rank_bound_violations = rank_bound_violations(trials, table, r);
  row.entropy_vector_violations = verify_entropy_vectors(trials, table.terminal_count()).violating;
  return row;
}

inline ConcentrationReport concentration_experiment(const ExperimentConfig& config) {
  config.validate();
  const PrimeModulus p(config.prime);
  const auto table = mincut_table(config.hypergraph);
  ConcentrationReport report;
  report.prime = config.prime;
  report.delta = config.delta;
  for (int r : config.bond_exponents) {
    const auto [layout, omega] = build_omega(config.hypergraph, p, r);
    const auto trials = run_trials(layout, omega, config.trials, config.seed,
                                   static_cast<std::uint64_t>(r), config.jobs);
    report.rows.push_back(summarize_concentration(layout, table, trials, config.delta));
  }
  return report;
}

/// Moments and concentration from one shared batch of trials per r.
struct SimulationReport {
  ExperimentConfig config;
  MinCutTable table;
  std::vector<MomentReport> moments;
  ConcentrationReport concentration;
};

inline SimulationReport simulate(const ExperimentConfig& config) {
  config.validate();
  const PrimeModulus p(config.prime);
  SimulationReport report{config, mincut_table(config.hypergraph), {}, {}};
  report.concentration.prime = config.prime;
  report.concentration.delta = config.delta;
  for (int r : config.bond_exponents) {
    const auto [layout, omega] = build_omega(config.hypergraph, p, r);
    const auto trials = run_trials(layout, omega, config.trials, config.seed,
                                   static_cast<std::uint64_t>(r), config.jobs);
    report.moments.push_back(summarize_moments(layout, report.table, trials));
    report.concentration.rows.push_back(
        summarize_concentration(layout, report.table, trials, config.delta));
  }
  return report;
}

}  // namespace hgstab
