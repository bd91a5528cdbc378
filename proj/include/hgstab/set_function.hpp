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

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "hgstab/errors.hpp"
#include "hgstab/hypergraph.hpp"

namespace hgstab {

struct SetFunctionViolation {
  enum class Kind { kSubmodularity, kSymmetry };
  Kind kind;
  TerminalMask a;
  TerminalMask b;  // complement of a for symmetry violations

  friend bool operator==(const SetFunctionViolation&, const SetFunctionViolation&) = default;
};

/// Checks f(A) + f(B) >= f(A|B) + f(A&B) for all A < B and
/// |f(A) - f(T\A)| <= tol for all A, on a function given as a table indexed
/// by terminal mask. Works with exact integer types (tol = 0) and doubles.
template <class T>
std::vector<SetFunctionViolation> check_symmetric_submodular(std::span<const T> f, std::size_t n,
                                                             T tol) {
  const std::size_t size = std::size_t{1} << n;
  if (f.size() != size) {
    throw InputError("set function has " + std::to_string(f.size()) + " entries, expected " +
                     std::to_string(size));
  }
  std::vector<SetFunctionViolation> out;
  const TerminalMask full = static_cast<TerminalMask>(size - 1);
  for (TerminalMask a = 0; a < size; ++a) {
    for (TerminalMask b = a + 1; b < size; ++b) {
      if ((a & b) == a || (a & b) == b) continue;  // nested pairs hold with equality
      if (f[a] + f[b] + tol < f[a | b] + f[a & b]) {
        out.push_back({SetFunctionViolation::Kind::kSubmodularity, a, b});
      }
    }
  }
  for (TerminalMask a = 0; a < size; ++a) {
    const TerminalMask c = full & ~a;
    if (a >= c) continue;
    const T diff = f[a] > f[c] ? f[a] - f[c] : f[c] - f[a];
    if (diff > tol) out.push_back({SetFunctionViolation::Kind::kSymmetry, a, c});
  }
  return out;
}

/// Keyed variant: every one of the 2^n subsets must be present.
inline std::vector<SetFunctionViolation> check_symmetric_submodular(
    const std::map<TerminalMask, double>& f, std::size_t n, double tol = 1e-9) {
  const std::size_t size = std::size_t{1} << n;
  std::vector<double> table(size);
  for (TerminalMask a = 0; a < size; ++a) {
    auto it = f.find(a);
    if (it == f.end()) throw InputError("set function is missing subset " + std::to_string(a));
    table[a] = it->second;
  }
  return check_symmetric_submodular<double>(table, n, tol);
}

inline std::vector<SetFunctionViolation> check_symmetric_submodular(const MinCutTable& t) {
  return check_symmetric_submodular<long long>(t.values(), t.terminal_count(), 0);
}

}  // namespace hgstab
