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
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hgstab/errors.hpp"
#include "hgstab/rng.hpp"

namespace hgstab {

using Residue = std::uint8_t;

/// A prime p < 256. Residues are kept as the smallest nonnegative
/// representative.
class PrimeModulus {
 public:
  explicit PrimeModulus(int p) : p_(p) {
    if (p < 2 || p > 251 || !is_prime(p)) {
      throw InputError("modulus must be a prime below 256, got " + std::to_string(p));
    }
  }

  int value() const { return p_; }

  Residue reduce(long long a) const {
    long long r = a % p_;
    return static_cast<Residue>(r < 0 ? r + p_ : r);
  }
  Residue add(int a, int b) const { return static_cast<Residue>((a + b) % p_); }
  Residue sub(int a, int b) const { return static_cast<Residue>((a - b + p_) % p_); }
  Residue mul(int a, int b) const { return static_cast<Residue>((a * b) % p_); }
  Residue neg(int a) const { return static_cast<Residue>((p_ - a) % p_); }

  /// Multiplicative inverse of a nonzero residue (Fermat).
  Residue inv(int a) const {
    if (a % p_ == 0) throw InputError("zero has no inverse mod p");
    int result = 1;
    int base = a % p_;
    for (int e = p_ - 2; e > 0; e >>= 1) {
      if (e & 1) result = (result * base) % p_;
      base = (base * base) % p_;
    }
    return static_cast<Residue>(result);
  }

  friend bool operator==(const PrimeModulus&, const PrimeModulus&) = default;

 private:
  static bool is_prime(int p) {
    for (int d = 2; d * d <= p; ++d) {
      if (p % d == 0) return false;
    }
    return true;
  }

  int p_;
};

/// Dense row-major matrix of residues.
class FpMatrix {
 public:
  FpMatrix() = default;
  FpMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {}

  /// Build from nested rows; entries are reduced mod p.
  static FpMatrix from_rows(const std::vector<std::vector<int>>& rows, const PrimeModulus& p) {
    const std::size_t cols = rows.empty() ? 0 : rows.front().size();
    FpMatrix m(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].size() != cols) throw InputError("ragged matrix rows");
      for (std::size_t c = 0; c < cols; ++c) m(r, c) = p.reduce(rows[r][c]);
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Residue& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  Residue operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<Residue> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const Residue> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t c = 0; c < cols_; ++c) std::swap((*this)(a, c), (*this)(b, c));
  }

  friend bool operator==(const FpMatrix&, const FpMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Residue> data_;
};

namespace detail {

// In-place forward elimination; returns rank. Pivot rows end up on top.
inline std::size_t eliminate(FpMatrix& m, const PrimeModulus& p, bool reduced) {
  std::size_t rank = 0;
  for (std::size_t c = 0; c < m.cols() && rank < m.rows(); ++c) {
    std::size_t pivot = rank;
    while (pivot < m.rows() && m(pivot, c) == 0) ++pivot;
    if (pivot == m.rows()) continue;
    m.swap_rows(pivot, rank);
    const Residue scale = p.inv(m(rank, c));
    for (std::size_t k = c; k < m.cols(); ++k) m(rank, k) = p.mul(m(rank, k), scale);
    for (std::size_t r = reduced ? 0 : rank + 1; r < m.rows(); ++r) {
      if (r == rank || m(r, c) == 0) continue;
      const int factor = m(r, c);
      for (std::size_t k = c; k < m.cols(); ++k) {
        m(r, k) = p.sub(m(r, k), p.mul(factor, m(rank, k)));
      }
    }
    ++rank;
  }
  return rank;
}

}  // namespace detail

/// Rank over GF(p) by Gaussian elimination. The argument is not modified.
inline std::size_t rank(const FpMatrix& m, const PrimeModulus& p) {
  FpMatrix work = m;
  return detail::eliminate(work, p, false);
}

/// Reduced row echelon form with zero rows dropped.
inline FpMatrix row_reduce(const FpMatrix& m, const PrimeModulus& p) {
  FpMatrix work = m;
  const std::size_t r = detail::eliminate(work, p, true);
  FpMatrix out(r, m.cols());
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t c = 0; c < m.cols(); ++c) out(i, c) = work(i, c);
  }
  return out;
}

/// Symplectic form <u_x, v_z> - <u_z, v_x> on (x|z)-split vectors.
inline Residue symplectic_product(std::span<const Residue> u, std::span<const Residue> v,
                                  const PrimeModulus& p) {
  if (u.size() != v.size() || u.size() % 2 != 0) {
    throw InputError("symplectic_product: vectors must have equal even length");
  }
  const std::size_t m = u.size() / 2;
  long long acc = 0;
  for (std::size_t i = 0; i < m; ++i) {
    acc += static_cast<long long>(u[i]) * v[m + i];
    acc -= static_cast<long long>(u[m + i]) * v[i];
  }
  return p.reduce(acc);
}

namespace detail {

using Vec = std::vector<Residue>;

inline Vec combine(const std::vector<Vec>& basis, std::span<const Residue> coeffs,
                   const PrimeModulus& p) {
  Vec out(basis.front().size(), 0);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (coeffs[i] == 0) continue;
    for (std::size_t k = 0; k < out.size(); ++k) {
      out[k] = p.add(out[k], p.mul(coeffs[i], basis[i][k]));
    }
  }
  return out;
}

// Keeps the first maximal linearly independent subfamily of `vectors`.
inline std::vector<Vec> independent_subset(const std::vector<Vec>& vectors, const PrimeModulus& p) {
  std::vector<Vec> kept;
  std::vector<Vec> echelon;
  std::vector<std::size_t> pivots;
  for (const Vec& v : vectors) {
    Vec w = v;
    for (std::size_t i = 0; i < echelon.size(); ++i) {
      const Residue f = w[pivots[i]];
      if (f == 0) continue;
      for (std::size_t k = 0; k < w.size(); ++k) w[k] = p.sub(w[k], p.mul(f, echelon[i][k]));
    }
    std::size_t c = 0;
    while (c < w.size() && w[c] == 0) ++c;
    if (c == w.size()) continue;
    const Residue s = p.inv(w[c]);
    for (auto& e : w) e = p.mul(e, s);
    echelon.push_back(std::move(w));
    pivots.push_back(c);
    kept.push_back(v);
  }
  return kept;
}

}  // namespace detail

/// Uniformly random element of Sp(2m, p), returned as a 2m x 2m matrix whose
/// rows are the images of X_1, Z_1, X_2, Z_2, ... in that order.
///
/// Builds a symplectic basis pair by pair: e_i is uniform over the nonzero
/// vectors of the current symplectic complement W, f_i is uniform over
/// {v in W : <e_i, v> = 1}, and W shrinks to the complement of span(e_i, f_i).
/// Every symplectic basis is produced with equal probability.
template <class URBG>
FpMatrix random_symplectic(std::size_t m, const PrimeModulus& p, URBG& rng) {
  using detail::Vec;
  const int q = p.value();
  const std::size_t dim = 2 * m;
  std::vector<Vec> basis;  // spans W
  for (std::size_t i = 0; i < dim; ++i) {
    Vec v(dim, 0);
    v[i] = 1;
    basis.push_back(std::move(v));
  }

  auto form = [&](const Vec& a, const Vec& b) { return symplectic_product(a, b, p); };

  FpMatrix out(dim, dim);
  for (std::size_t step = 0; step < m; ++step) {
    Vec coeffs(basis.size());
    Vec e;
    do {
      for (auto& c : coeffs) c = static_cast<Residue>(uniform_below(rng, q));
      e = detail::combine(basis, coeffs, p);
    } while (std::all_of(e.begin(), e.end(), [](Residue r) { return r == 0; }));

    // u with <e, u> = 1; exists because the form is nondegenerate on W.
    Vec u;
    for (const Vec& b : basis) {
      const Residue s = form(e, b);
      if (s != 0) {
        u = b;
        const Residue si = p.inv(s);
        for (auto& x : u) x = p.mul(x, si);
        break;
      }
    }
    for (auto& c : coeffs) c = static_cast<Residue>(uniform_below(rng, q));
    Vec v = detail::combine(basis, coeffs, p);
    // v - <e,v> u is uniform on e^perp within W; shift by u onto <e, .> = 1.
    const Residue ev = form(e, v);
    Vec f(dim);
    for (std::size_t k = 0; k < dim; ++k) {
      f[k] = p.add(p.sub(v[k], p.mul(ev, u[k])), u[k]);
    }

    for (std::size_t k = 0; k < dim; ++k) {
      out(2 * step, k) = e[k];
      out(2 * step + 1, k) = f[k];
    }

    if (step + 1 == m) break;
    // Project W onto the symplectic complement of span(e, f).
    std::vector<Vec> projected;
    projected.reserve(basis.size());
    for (const Vec& b : basis) {
      const Residue be = form(b, e);
      const Residue bf = form(b, f);
      Vec w(dim);
      for (std::size_t k = 0; k < dim; ++k) {
        w[k] = p.sub(p.add(b[k], p.mul(be, f[k])), p.mul(bf, e[k]));
      }
      projected.push_back(std::move(w));
    }
    basis = detail::independent_subset(projected, p);
  }
  return out;
}

/// Basis (m x 2m) of a uniformly random Lagrangian subspace of GF(p)^{2m}:
/// the image of the all-Z Lagrangian under a uniformly random symplectic map.
template <class URBG>
FpMatrix random_lagrangian(std::size_t m, const PrimeModulus& p, URBG& rng) {
  if (m == 0) throw InputError("random_lagrangian: need at least one qudit");
  const FpMatrix s = random_symplectic(m, p, rng);
  FpMatrix out(m, 2 * m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t k = 0; k < 2 * m; ++k) out(i, k) = s(2 * i + 1, k);
  }
  return out;
}

}  // namespace hgstab
