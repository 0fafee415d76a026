// Copyright 2026 The lossyboson Authors
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

// Brute-force reference implementations used only by the tests. They share no
// code with the library paths they check.
#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <map>
#include <numeric>
#include <vector>

namespace lossyboson::testing {

using C = std::complex<double>;
using Matrix = std::vector<std::vector<C>>;

// Sum over all n! permutations.
inline C permutation_sum(const Matrix& a) {
  const std::size_t n = a.size();
  if (n == 0) return 1.0;
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  C total = 0.0;
  do {
    C prod = 1.0;
    for (std::size_t i = 0; i < n; ++i) prod *= a[i][perm[i]];
    total += prod;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

inline double fact(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// Row list r (0-based output modes, one per photon) and column list c (0-based
// input modes, one per photon) of a unitary given as a dense matrix.
inline Matrix pick(const Matrix& u, const std::vector<int>& rows, const std::vector<int>& cols) {
  Matrix out(rows.size(), std::vector<C>(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) out[i][j] = u[static_cast<std::size_t>(rows[i])][static_cast<std::size_t>(cols[j])];
  return out;
}

inline std::vector<int> expand(const std::vector<int>& occ) {
  std::vector<int> out;
  for (std::size_t i = 0; i < occ.size(); ++i)
    for (int k = 0; k < occ[i]; ++k) out.push_back(static_cast<int>(i));
  return out;
}

// Removal law of n - l photons: every (n - l)-subset of the labelled photons is
// equally likely; returns the probability of each removed content.
inline std::map<std::vector<int>, double> removal_law(const std::vector<int>& s, int l) {
  const std::vector<int> labels = expand(s);
  const int n = static_cast<int>(labels.size());
  std::map<std::vector<int>, double> out;
  double subsets = 0.0;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (std::popcount(mask) != n - l) continue;
    std::vector<int> k(s.size(), 0);
    for (int b = 0; b < n; ++b)
      if (mask & (1u << b)) ++k[static_cast<std::size_t>(labels[static_cast<std::size_t>(b)])];
    out[k] += 1.0;
    subsets += 1.0;
  }
  for (auto& [k, w] : out) w /= subsets;
  return out;
}

}  // namespace lossyboson::testing
