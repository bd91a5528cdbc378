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

// Qudit stabilizer states over GF(p) in the check-matrix picture.
//
// A generalized Pauli operator is tau^s X^x Z^z with X|j> = |j+1>,
// Z|j> = omega^j |j>, omega = exp(2 pi i / p). For odd p, tau = omega and s
// lives mod p. For p = 2, tau = i and s lives mod 4; a qubit Pauli is
// Hermitian iff s = x.z (mod 2), and only Hermitian generators are stored.
// With this convention the product rule for every p is
//
//   (tau^s X^a Z^b)(tau^t X^c Z^d) = tau^(s + t + k <b,c>) X^(a+c) Z^(b+d)
//
// where k = 2 for p = 2 and k = 1 otherwise.

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
#include "hgstab/rng.hpp"

namespace hgstab {

using PhaseExponent = std::uint8_t;

inline int phase_modulus(const PrimeModulus& p) { return p.value() == 2 ? 4 : p.value(); }
inline int phase_scale(const PrimeModulus& p) { return p.value() == 2 ? 2 : 1; }

namespace detail {

inline PhaseExponent reduce_phase(long long s, const PrimeModulus& p) {
  const long long m = phase_modulus(p);
  long long r = s % m;
  return static_cast<PhaseExponent>(r < 0 ? r + m : r);
}

// Phase exponent of g^k for g = tau^s X^x Z^z.
inline long long power_phase(std::span<const Residue> xz, PhaseExponent s, long long k,
                             const PrimeModulus& p) {
  const std::size_t n = xz.size() / 2;
  long long xdotz = 0;
  for (std::size_t q = 0; q < n; ++q) xdotz += static_cast<long long>(xz[q]) * xz[n + q];
  return k * s + phase_scale(p) * xdotz * (k * (k - 1) / 2);
}

// dst <- dst * src^k. Exact for any pair; callers in this file only use it
// on commuting operators, where the order of the factors is irrelevant.
inline void multiply_power_into(std::span<Residue> dst, PhaseExponent& dst_phase,
                                std::span<const Residue> src, PhaseExponent src_phase, int k,
                                const PrimeModulus& p) {
  k %= p.value();
  if (k < 0) k += p.value();
  if (k == 0) return;
  const std::size_t n = dst.size() / 2;
  long long phase = dst_phase + power_phase(src, src_phase, k, p);
  long long cross = 0;
  for (std::size_t q = 0; q < n; ++q) {
    cross += static_cast<long long>(dst[n + q]) * p.mul(k, src[q]);
  }
  phase += phase_scale(p) * cross;
  for (std::size_t c = 0; c < dst.size(); ++c) dst[c] = p.add(dst[c], p.mul(k, src[c]));
  dst_phase = reduce_phase(phase, p);
}

// g <- g^k in place.
inline void raise_in_place(std::span<Residue> xz, PhaseExponent& phase, int k,
                           const PrimeModulus& p) {
  const long long s = power_phase(xz, phase, k, p);
  for (auto& e : xz) e = p.mul(k, e);
  phase = reduce_phase(s, p);
}

}  // namespace detail

/// A generalized Pauli operator on n qudits: (x|z) exponent vector + phase.
class Pauli {
 public:
  explicit Pauli(std::size_t n) : xz_(2 * n, 0) {}
  Pauli(std::vector<Residue> xz, PhaseExponent phase) : xz_(std::move(xz)), phase_(phase) {
    if (xz_.size() % 2 != 0) throw InputError("Pauli vector must have even length");
  }

  static Pauli x_on(std::size_t n, std::size_t site) {
    Pauli out(n);
    out.xz_.at(site) = 1;
    return out;
  }
  static Pauli z_on(std::size_t n, std::size_t site) {
    Pauli out(n);
    out.xz_.at(n + site) = 1;
    return out;
  }

  std::size_t num_qudits() const { return xz_.size() / 2; }
  Residue x(std::size_t q) const { return xz_[q]; }
  Residue z(std::size_t q) const { return xz_[num_qudits() + q]; }
  PhaseExponent phase() const { return phase_; }
  std::span<const Residue> vector() const { return xz_; }
  std::span<Residue> mutable_vector() { return xz_; }
  PhaseExponent& mutable_phase() { return phase_; }

  bool is_identity() const {
    return std::all_of(xz_.begin(), xz_.end(), [](Residue r) { return r == 0; });
  }

  friend bool operator==(const Pauli&, const Pauli&) = default;

 private:
  std::vector<Residue> xz_;
  PhaseExponent phase_ = 0;
};

/// a * b with full phase tracking.
inline Pauli multiply(const Pauli& a, const Pauli& b, const PrimeModulus& p) {
  if (a.num_qudits() != b.num_qudits()) throw InputError("Pauli size mismatch");
  Pauli out = a;
  detail::multiply_power_into(out.mutable_vector(), out.mutable_phase(), b.vector(), b.phase(), 1,
                              p);
  return out;
}

inline Pauli power(const Pauli& a, int k, const PrimeModulus& p) {
  Pauli out = a;
  k %= p.value();
  if (k < 0) k += p.value();
  detail::raise_in_place(out.mutable_vector(), out.mutable_phase(), k, p);
  return out;
}

/// For p = 2 the phase must make the operator Hermitian; any phase is
/// admissible for odd p (g^p = I holds automatically).
inline bool has_admissible_phase(std::span<const Residue> xz, PhaseExponent phase,
                                 const PrimeModulus& p) {
  if (phase >= phase_modulus(p)) return false;
  if (p.value() != 2) return true;
  const std::size_t n = xz.size() / 2;
  int xdotz = 0;
  for (std::size_t q = 0; q < n; ++q) xdotz += xz[q] * xz[n + q];
  return (phase - xdotz) % 2 == 0;
}

/// Pure stabilizer state on n qudits: n x 2n check matrix of pairwise
/// commuting, independent generators plus one phase exponent per generator.
class StabilizerTableau {
 public:
  /// Validates commutation, full rank and phase admissibility.
  StabilizerTableau(PrimeModulus p, FpMatrix generators, std::vector<PhaseExponent> phases)
      : p_(p), g_(std::move(generators)), phases_(std::move(phases)) {
    validate();
  }

  /// Skips validation; for internal code that preserves the invariants.
  static StabilizerTableau trusted(PrimeModulus p, FpMatrix generators,
                                   std::vector<PhaseExponent> phases) {
    return StabilizerTableau(Trusted{}, p, std::move(generators), std::move(phases));
  }

  static StabilizerTableau empty(PrimeModulus p) { return trusted(p, FpMatrix(0, 0), {}); }

  static StabilizerTableau from_paulis(PrimeModulus p, const std::vector<Pauli>& gens) {
    const std::size_t n = gens.empty() ? 0 : gens.front().num_qudits();
    FpMatrix g(gens.size(), 2 * n);
    std::vector<PhaseExponent> ph;
    for (std::size_t r = 0; r < gens.size(); ++r) {
      if (gens[r].num_qudits() != n) throw InputError("generators act on different qudit counts");
      for (std::size_t c = 0; c < 2 * n; ++c) g(r, c) = p.reduce(gens[r].vector()[c]);
      ph.push_back(gens[r].phase());
    }
    return StabilizerTableau(p, std::move(g), std::move(ph));
  }

  std::size_t num_qudits() const { return g_.cols() / 2; }
  const PrimeModulus& prime() const { return p_; }
  const FpMatrix& generators() const { return g_; }
  const std::vector<PhaseExponent>& phases() const { return phases_; }

  Pauli generator(std::size_t i) const {
    auto row = g_.row(i);
    return Pauli(std::vector<Residue>(row.begin(), row.end()), phases_[i]);
  }

  /// Row-reduced generators of the same group; equal states give equal
  /// canonical tableaux.
  StabilizerTableau canonical() const;

  friend bool operator==(const StabilizerTableau& a, const StabilizerTableau& b) {
    return a.p_ == b.p_ && a.g_ == b.g_ && a.phases_ == b.phases_;
  }

  // Mutable row access for the in-place algorithms below.
  FpMatrix& mutable_generators() { return g_; }
  std::vector<PhaseExponent>& mutable_phases() { return phases_; }

 private:
  struct Trusted {};
  StabilizerTableau(Trusted, PrimeModulus p, FpMatrix g, std::vector<PhaseExponent> ph)
      : p_(p), g_(std::move(g)), phases_(std::move(ph)) {}

  void validate() const {
    const std::size_t n = num_qudits();
    if (g_.cols() % 2 != 0 || g_.rows() != n || phases_.size() != n) {
      throw InputError("tableau must have n generators of length 2n and n phases");
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (!has_admissible_phase(g_.row(i), phases_[i], p_)) {
        throw InputError("generator " + std::to_string(i) + " has an inadmissible phase");
      }
      for (std::size_t j = i + 1; j < n; ++j) {
        if (symplectic_product(g_.row(i), g_.row(j), p_) != 0) {
          throw InputError("generators " + std::to_string(i) + " and " + std::to_string(j) +
                           " do not commute");
        }
      }
    }
    if (rank(g_, p_) != n) throw InputError("generators are not independent");
  }

  PrimeModulus p_;
  FpMatrix g_;
  std::vector<PhaseExponent> phases_;
};

namespace detail {

// Row-reduces the generators in place, visiting columns in `order`. Only
// products of generators are formed, so the stabilizer group (with phases)
// is unchanged. Returns the number of pivot rows; pivot entries become 1.
inline std::size_t echelonize(StabilizerTableau& t, std::span<const std::size_t> order,
                              bool reduced) {
  FpMatrix& g = t.mutable_generators();
  auto& ph = t.mutable_phases();
  const PrimeModulus& p = t.prime();
  std::size_t rank = 0;
  for (std::size_t col : order) {
    if (rank == g.rows()) break;
    std::size_t pivot = rank;
    while (pivot < g.rows() && g(pivot, col) == 0) ++pivot;
    if (pivot == g.rows()) continue;
    g.swap_rows(pivot, rank);
    std::swap(ph[pivot], ph[rank]);
    if (g(rank, col) != 1) raise_in_place(g.row(rank), ph[rank], p.inv(g(rank, col)), p);
    for (std::size_t r = reduced ? 0 : rank + 1; r < g.rows(); ++r) {
      if (r == rank || g(r, col) == 0) continue;
      multiply_power_into(g.row(r), ph[r], g.row(rank), ph[rank], p.value() - g(r, col), p);
    }
    ++rank;
  }
  return rank;
}

inline std::vector<std::size_t> natural_order(std::size_t cols) {
  std::vector<std::size_t> order(cols);
  std::iota(order.begin(), order.end(), 0);
  return order;
}

enum class Postselection { kDeterministic, kRandom, kZero };

// Projects onto the eigenvalue-1 eigenspace of `h` (a full-width Pauli).
inline Postselection postselect(StabilizerTableau& t, const Pauli& h) {
  FpMatrix& g = t.mutable_generators();
  auto& ph = t.mutable_phases();
  const PrimeModulus& p = t.prime();
  const std::size_t n = g.rows();

  std::vector<Residue> lambda(n);
  std::size_t pivot = n;
  for (std::size_t i = 0; i < n; ++i) {
    lambda[i] = symplectic_product(g.row(i), h.vector(), p);
    if (lambda[i] != 0 && pivot == n) pivot = i;
  }

  if (pivot < n) {
    // Outcome uniform over p eigenvalues; keep the eigenvalue-1 branch.
    const Residue inv = p.inv(lambda[pivot]);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == pivot || lambda[i] == 0) continue;
      multiply_power_into(g.row(i), ph[i], g.row(pivot), ph[pivot], p.neg(p.mul(lambda[i], inv)),
                          p);
    }
    auto row = g.row(pivot);
    std::copy(h.vector().begin(), h.vector().end(), row.begin());
    ph[pivot] = h.phase();
    return Postselection::kRandom;
  }

  // h commutes with a maximal abelian group, so h = tau^t * (product of
  // generators) and its eigenvalue on the state is tau^t.
  const auto order = natural_order(g.cols());
  const std::size_t r = echelonize(t, order, false);
  Pauli residual = h;
  for (std::size_t i = 0; i < r; ++i) {
    std::size_t c = 0;
    while (g(i, c) == 0) ++c;
    if (residual.vector()[c] == 0) continue;
    multiply_power_into(residual.mutable_vector(), residual.mutable_phase(), g.row(i), ph[i],
                        p.value() - residual.vector()[c], p);
  }
  if (!residual.is_identity()) {
    throw InvariantError("commuting Pauli is not in the stabilizer group; tableau is not pure");
  }
  return residual.phase() == 0 ? Postselection::kDeterministic : Postselection::kZero;
}

}  // namespace detail

inline StabilizerTableau StabilizerTableau::canonical() const {
  StabilizerTableau out = *this;
  detail::echelonize(out, detail::natural_order(g_.cols()), true);
  return out;
}

/// |GHZ_k> = p^{-1/2} sum_i |i...i>, stabilized by X^{(x)k} and
/// Z_j Z_{j+1}^{-1}.
inline StabilizerTableau ghz_tableau(std::size_t parties, const PrimeModulus& p) {
  if (parties == 0) throw InputError("GHZ state needs at least one party");
  const std::size_t k = parties;
  FpMatrix g(k, 2 * k);
  for (std::size_t q = 0; q < k; ++q) g(0, q) = 1;
  for (std::size_t j = 1; j < k; ++j) {
    g(j, k + j - 1) = 1;
    g(j, k + j) = p.neg(1);
  }
  return StabilizerTableau::trusted(p, std::move(g), std::vector<PhaseExponent>(k, 0));
}

/// Computational basis state |v_1 ... v_n>.
inline StabilizerTableau basis_state(const std::vector<int>& values, const PrimeModulus& p) {
  const std::size_t n = values.size();
  FpMatrix g(n, 2 * n);
  std::vector<PhaseExponent> ph(n);
  for (std::size_t q = 0; q < n; ++q) {
    g(q, n + q) = 1;
    // Z|v> = omega^v |v>, so the stabilizer is omega^{-v} Z.
    ph[q] = detail::reduce_phase(-static_cast<long long>(phase_scale(p)) * values[q], p);
  }
  return StabilizerTableau::trusted(p, std::move(g), std::move(ph));
}

/// Tensor product; qudits of `a` come first.
inline StabilizerTableau tensor(const StabilizerTableau& a, const StabilizerTableau& b) {
  if (!(a.prime() == b.prime())) throw InputError("tensor: prime mismatch");
  const std::size_t na = a.num_qudits();
  const std::size_t nb = b.num_qudits();
  const std::size_t n = na + nb;
  FpMatrix g(n, 2 * n);
  for (std::size_t r = 0; r < na; ++r) {
    for (std::size_t q = 0; q < na; ++q) {
      g(r, q) = a.generators()(r, q);
      g(r, n + q) = a.generators()(r, na + q);
    }
  }
  for (std::size_t r = 0; r < nb; ++r) {
    for (std::size_t q = 0; q < nb; ++q) {
      g(na + r, na + q) = b.generators()(r, q);
      g(na + r, n + na + q) = b.generators()(r, nb + q);
    }
  }
  std::vector<PhaseExponent> ph = a.phases();
  ph.insert(ph.end(), b.phases().begin(), b.phases().end());
  return StabilizerTableau::trusted(a.prime(), std::move(g), std::move(ph));
}

/// Entropy of the reduced state on `sites`, in units of log p:
/// |A| - n + rank(generators restricted to the complement of A). Stabilizer
/// reduced states have flat spectra, so this is the Renyi entropy of every
/// order.
inline long long reduced_entropy(const StabilizerTableau& t, std::span<const std::size_t> sites) {
  const std::size_t n = t.num_qudits();
  std::vector<bool> in_a(n, false);
  std::size_t count = 0;
  for (auto s : sites) {
    if (s >= n) throw InputError("reduced_entropy: site " + std::to_string(s) + " out of range");
    if (!in_a[s]) ++count;
    in_a[s] = true;
  }
  std::vector<std::size_t> outside;
  for (std::size_t q = 0; q < n; ++q) {
    if (!in_a[q]) outside.push_back(q);
  }
  FpMatrix restricted(n, 2 * outside.size());
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t j = 0; j < outside.size(); ++j) {
      restricted(r, j) = t.generators()(r, outside[j]);
      restricted(r, outside.size() + j) = t.generators()(r, n + outside[j]);
    }
  }
  return static_cast<long long>(count) - static_cast<long long>(n) +
         static_cast<long long>(rank(restricted, t.prime()));
}

/// Result of applying (<target| (x) I) to a state.
struct ProjectionOutcome {
  std::optional<StabilizerTableau> state;  // empty when the projection is zero
  long long free_count = 0;                // tr = p^{-free_count} when nonzero

  bool is_zero() const { return !state.has_value(); }
};

/// Projects the qudits `sites` of `state` onto the stabilizer state `target`
/// and traces them out.
///
/// Each generator of `target` is measured in row order with the
/// eigenvalue-1 outcome postselected. A generator already in the group (up to
/// phase) either keeps the state or annihilates it; otherwise the outcome is
/// uniform over p values and the norm squared drops by 1/p.
inline ProjectionOutcome project_onto_stabilizer(const StabilizerTableau& state,
                                                 std::span<const std::size_t> sites,
                                                 const StabilizerTableau& target) {
  if (!(state.prime() == target.prime())) throw InputError("projection: prime mismatch");
  const std::size_t n = state.num_qudits();
  const std::size_t m = sites.size();
  if (target.num_qudits() != m) throw InputError("projection: target size does not match sites");
  std::vector<bool> used(n, false);
  for (auto s : sites) {
    if (s >= n) throw InputError("projection: site out of range");
    if (used[s]) throw InputError("projection: repeated site");
    used[s] = true;
  }

  StabilizerTableau work = state;
  ProjectionOutcome out;
  for (std::size_t k = 0; k < m; ++k) {
    Pauli h(n);
    for (std::size_t j = 0; j < m; ++j) {
      h.mutable_vector()[sites[j]] = target.generators()(k, j);
      h.mutable_vector()[n + sites[j]] = target.generators()(k, m + j);
    }
    h.mutable_phase() = target.phases()[k];
    switch (detail::postselect(work, h)) {
      case detail::Postselection::kZero:
        return out;
      case detail::Postselection::kRandom:
        ++out.free_count;
        break;
      case detail::Postselection::kDeterministic:
        break;
    }
  }

  // The group is now <target> x G_rest. Eliminate on the site columns first;
  // the rows left with no support on the sites generate G_rest.
  std::vector<std::size_t> order;
  std::vector<std::size_t> rest;
  for (auto s : sites) {
    order.push_back(s);
    order.push_back(n + s);
  }
  for (std::size_t q = 0; q < n; ++q) {
    if (!used[q]) rest.push_back(q);
  }
  for (auto q : rest) {
    order.push_back(q);
    order.push_back(n + q);
  }
  std::size_t site_rank = 0;
  {
    FpMatrix& g = work.mutable_generators();
    detail::echelonize(work, std::span(order).first(2 * m), false);
    while (site_rank < n) {
      bool touches = false;
      for (auto s : sites) touches = touches || g(site_rank, s) != 0 || g(site_rank, n + s) != 0;
      if (!touches) break;
      ++site_rank;
    }
  }
  if (site_rank != m) throw InvariantError("projected sites did not factor out");

  const std::size_t nr = rest.size();
  FpMatrix g(nr, 2 * nr);
  std::vector<PhaseExponent> ph(nr);
  for (std::size_t r = 0; r < nr; ++r) {
    for (std::size_t j = 0; j < nr; ++j) {
      g(r, j) = work.generators()(m + r, rest[j]);
      g(r, nr + j) = work.generators()(m + r, n + rest[j]);
    }
    ph[r] = work.phases()[m + r];
  }
  out.state = StabilizerTableau::trusted(state.prime(), std::move(g), std::move(ph));
  return out;
}

/// Uniformly random pure stabilizer state on m qudits.
template <class URBG>
StabilizerTableau sample_random_stabilizer(std::size_t m, const PrimeModulus& p, URBG& rng) {
  FpMatrix g = random_lagrangian(m, p, rng);
  std::vector<PhaseExponent> ph(m);
  for (std::size_t r = 0; r < m; ++r) {
    if (p.value() == 2) {
      int xdotz = 0;
      for (std::size_t q = 0; q < m; ++q) xdotz += g(r, q) * g(r, m + q);
      ph[r] = static_cast<PhaseExponent>((xdotz % 2) + 2 * uniform_below(rng, 2));
    } else {
      ph[r] = static_cast<PhaseExponent>(uniform_below(rng, p.value()));
    }
  }
  return StabilizerTableau::trusted(p, std::move(g), std::move(ph));
}

}  // namespace hgstab
