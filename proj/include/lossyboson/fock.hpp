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

// Fock-state representations and the combinatorics of removing photons from
// an occupation vector.
//
// Modes are 0-based in the C++ API of OccupationVector and 1-based in
// ModeAssignment entries and in every serialized form.
#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lossyboson/errors.hpp"

namespace lossyboson {

class OccupationVector {
 public:
  explicit OccupationVector(std::vector<int> occupations) : occ_(std::move(occupations)) {
    if (occ_.empty()) throw DimensionError("occupation vector needs at least one mode");
    for (int s : occ_) {
      if (s < 0) throw RangeError("occupation numbers must be nonnegative");
      n_ += s;
    }
  }

  static OccupationVector vacuum(int modes) {
    return OccupationVector(std::vector<int>(static_cast<std::size_t>(modes), 0));
  }

  int modes() const { return static_cast<int>(occ_.size()); }
  int photons() const { return n_; }
  int operator[](std::size_t i) const { return occ_[i]; }
  std::span<const int> values() const { return occ_; }
  const std::vector<int>& vector() const { return occ_; }

  // Number of occupied modes.
  int alpha() const {
    return static_cast<int>(std::count_if(occ_.begin(), occ_.end(), [](int s) { return s > 0; }));
  }

  // prod_i (s_i + 1), the number of sub-configurations including S itself.
  std::uint64_t product_plus_one() const {
    std::uint64_t p = 1;
    for (int s : occ_) {
      if (__builtin_mul_overflow(p, static_cast<std::uint64_t>(s + 1), &p))
        throw LimitError("prod(s_i+1) overflows 64 bits");
    }
    return p;
  }

  std::string to_string() const {
    std::string out = "[";
    for (std::size_t i = 0; i < occ_.size(); ++i) {
      if (i) out += ',';
      out += std::to_string(occ_[i]);
    }
    return out + "]";
  }

  friend bool operator==(const OccupationVector&, const OccupationVector&) = default;
  friend auto operator<=>(const OccupationVector& a, const OccupationVector& b) {
    return a.occ_ <=> b.occ_;
  }

 private:
  std::vector<int> occ_;
  int n_ = 0;
};

// First-quantized description: photon k sits in mode entries()[k] (1-based).
class ModeAssignment {
 public:
  ModeAssignment() = default;
  explicit ModeAssignment(std::vector<int> entries, bool ordered = false)
      : entries_(std::move(entries)), ordered_(ordered) {
    for (int e : entries_)
      if (e < 1) throw RangeError("mode assignment entries are 1-based");
    if (ordered_ && !std::is_sorted(entries_.begin(), entries_.end()))
      throw RangeError("ordered mode assignment must be nondecreasing");
  }

  std::size_t size() const { return entries_.size(); }
  bool ordered() const { return ordered_; }
  int operator[](std::size_t i) const { return entries_[i]; }
  std::span<const int> entries() const { return entries_; }

  void push_back(int mode) {
    if (mode < 1) throw RangeError("mode assignment entries are 1-based");
    if (ordered_ && !entries_.empty() && mode < entries_.back()) ordered_ = false;
    entries_.push_back(mode);
  }

  ModeAssignment sorted() const {
    auto e = entries_;
    std::sort(e.begin(), e.end());
    return ModeAssignment(std::move(e), true);
  }

  friend bool operator==(const ModeAssignment& a, const ModeAssignment& b) {
    return a.entries_ == b.entries_;
  }

 private:
  std::vector<int> entries_;
  bool ordered_ = false;
};

inline ModeAssignment to_assignment(const OccupationVector& t) {
  std::vector<int> z;
  z.reserve(static_cast<std::size_t>(t.photons()));
  for (int i = 0; i < t.modes(); ++i)
    for (int c = 0; c < t[i]; ++c) z.push_back(i + 1);
  return ModeAssignment(std::move(z), true);
}

inline OccupationVector to_occupation(const ModeAssignment& r, int modes) {
  if (modes < 1) throw DimensionError("need at least one mode");
  std::vector<int> t(static_cast<std::size_t>(modes), 0);
  for (int e : r.entries()) {
    if (e > modes) throw RangeError("mode assignment entry exceeds mode count");
    ++t[static_cast<std::size_t>(e - 1)];
  }
  return OccupationVector(std::move(t));
}

// ---------------------------------------------------------------------------
// Exact integer combinatorics. std::nullopt signals 64-bit overflow; the log_*
// companions take over in that case.

inline std::optional<std::uint64_t> binomial(int n, int k) {
  if (k < 0 || k > n) return std::uint64_t{0};
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
    if (r > std::numeric_limits<std::uint64_t>::max()) return std::nullopt;
  }
  return static_cast<std::uint64_t>(r);
}

inline double log_binomial(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

inline void check_parts(int n, std::span<const int> parts) {
  long total = 0;
  for (int p : parts) {
    if (p < 0) throw RangeError("multinomial parts must be nonnegative");
    total += p;
  }
  if (total != n) throw RangeError("multinomial parts must sum to n");
}

// n! / prod parts_i!, built as a product of binomials.
inline std::optional<std::uint64_t> multinomial(int n, std::span<const int> parts) {
  check_parts(n, parts);
  std::uint64_t r = 1;
  int running = 0;
  for (int p : parts) {
    running += p;
    auto b = binomial(running, p);
    if (!b || __builtin_mul_overflow(r, *b, &r)) return std::nullopt;
  }
  return r;
}

inline double log_multinomial(int n, std::span<const int> parts) {
  check_parts(n, parts);
  double r = std::lgamma(n + 1.0);
  for (int p : parts) r -= std::lgamma(p + 1.0);
  return r;
}

inline double factorial(int n) { return std::tgamma(n + 1.0); }

inline double product_of_factorials(const OccupationVector& s) {
  double p = 1.0;
  for (int v : s.values()) p *= factorial(v);
  return p;
}

// ---------------------------------------------------------------------------

struct SubConfiguration {
  OccupationVector removed;    // K
  OccupationVector remaining;  // S - K
  double weight;
};

namespace detail {

// Visits every K <= bound (componentwise) with |K| = total, lexicographically.
inline void for_each_bounded(std::span<const int> bound, int total,
                             const std::function<void(const std::vector<int>&)>& fn) {
  const std::size_t m = bound.size();
  std::vector<int> suffix(m + 1, 0);
  for (std::size_t i = m; i-- > 0;) suffix[i] = suffix[i + 1] + bound[i];
  if (total < 0 || total > suffix[0]) return;
  std::vector<int> k(m, 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
    if (i == m) {
      if (left == 0) fn(k);
      return;
    }
    const int lo = std::max(0, left - suffix[i + 1]);
    const int hi = std::min(bound[i], left);
    for (int v = lo; v <= hi; ++v) {
      k[i] = v;
      rec(i + 1, left - v);
    }
    k[i] = 0;
  };
  rec(0, total);
}

}  // namespace detail

// All photon-number vectors of n photons in m modes, lexicographic order.
inline void for_each_occupation(int photons, int modes,
                                const std::function<void(const OccupationVector&)>& fn) {
  std::vector<int> bound(static_cast<std::size_t>(modes), photons);
  detail::for_each_bounded(bound, photons,
                           [&](const std::vector<int>& t) { fn(OccupationVector(t)); });
}

// Sub-configurations left after removing n - l photons from S.
//
// The weight of K is the multivariate hypergeometric law
//   prod_i C(s_i, K_i) / C(n, n - l),
// which is what tracing n - l particles out of the symmetrized state yields.
inline std::vector<SubConfiguration> subconfigurations(const OccupationVector& s, int l) {
  const int n = s.photons();
  if (l < 1 || l > n) throw RangeError("subconfigurations: l must lie in [1, n]");
  const int removed = n - l;
  const auto denom = binomial(n, removed);
  const double log_denom = log_binomial(n, removed);

  std::vector<SubConfiguration> out;
  detail::for_each_bounded(s.values(), removed, [&](const std::vector<int>& k) {
    std::vector<int> rest(k.size());
    std::optional<std::uint64_t> num = std::uint64_t{1};
    double log_num = 0.0;
    for (std::size_t i = 0; i < k.size(); ++i) {
      rest[i] = s[i] - k[i];
      log_num += log_binomial(s[i], k[i]);
      if (num) {
        auto b = binomial(s[i], k[i]);
        std::uint64_t next;
        if (!b || __builtin_mul_overflow(*num, *b, &next))
          num.reset();
        else
          num = next;
      }
    }
    const double w = (num && denom) ? static_cast<double>(*num) / static_cast<double>(*denom)
                                    : std::exp(log_num - log_denom);
    out.push_back({OccupationVector(k), OccupationVector(std::move(rest)), w});
  });
  return out;
}

// N_l(S) for l = 1..n (index l-1): the number of l-photon configurations
// reachable by removing photons from S. Sum over l equals prod(s_i+1) - 1.
inline std::vector<std::uint64_t> count_subconfigurations(const OccupationVector& s) {
  const int n = s.photons();
  // Coefficients of prod_i (1 + x + ... + x^{s_i}); coefficient of x^j counts
  // removals of j photons.
  std::vector<std::uint64_t> poly(1, 1);
  for (int si : s.values()) {
    if (si == 0) continue;
    std::vector<std::uint64_t> next(poly.size() + static_cast<std::size_t>(si), 0);
    for (std::size_t a = 0; a < poly.size(); ++a)
      for (int b = 0; b <= si; ++b)
        if (__builtin_add_overflow(next[a + b], poly[a], &next[a + b]))
          throw LimitError("sub-configuration count overflows 64 bits");
    poly = std::move(next);
  }
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(n), 0);
  for (int l = 1; l <= n; ++l) counts[static_cast<std::size_t>(l - 1)] = poly[static_cast<std::size_t>(n - l)];
  return counts;
}

// ---------------------------------------------------------------------------

enum class InputClass { A, B, C, General };

inline const char* to_string(InputClass c) {
  switch (c) {
    case InputClass::A: return "A";
    case InputClass::B: return "B";
    case InputClass::C: return "C";
    case InputClass::General: return "general";
  }
  return "?";
}

struct InputClassification {
  InputClass label;
  double predicted_runtime;  // T_A, T_B, or the generic sampler bound
  int bins;                  // alpha_S
  int singles;               // modes holding exactly one photon
  int multi_bins;            // modes holding more than one photon
};

// Generic sampler runtime bound n * m * prod(s_j+1)^2 * alpha_S.
inline double sampler_runtime_bound(const OccupationVector& s) {
  double p = 1.0;
  for (int v : s.values()) p *= (v + 1.0);
  return static_cast<double>(s.photons()) * s.modes() * p * p * s.alpha();
}

// Labels an input by the efficiently simulable families.
//   A: at most `max_bins_a` occupied modes.
//   B: exactly one multiply-occupied mode and at most c*ln(n) singles.
//   C: at most max_bins_a + 1 multiply-occupied modes and at most c*ln(n) singles.
// Logarithms are natural.
inline InputClassification classify_input(const OccupationVector& s, double c, int max_bins_a = 2) {
  const int n = s.photons();
  const int m = s.modes();
  InputClassification r{InputClass::General, sampler_runtime_bound(s), s.alpha(), 0, 0};
  for (int v : s.values()) {
    if (v == 1) ++r.singles;
    if (v > 1) ++r.multi_bins;
  }
  const double log_n = n > 0 ? std::log(static_cast<double>(n)) : 0.0;
  const bool few_singles = r.singles <= c * log_n;
  if (r.bins <= max_bins_a) {
    const double k = r.bins;
    r.label = InputClass::A;
    r.predicted_runtime = k * m * n * std::pow(n + 1.0, 2.0 * k);
  } else if (r.multi_bins == 1 && few_singles) {
    r.label = InputClass::B;
    r.predicted_runtime = c * m * std::pow(static_cast<double>(n), 2.0 * c + 3.0) * log_n;
  } else if (r.multi_bins <= max_bins_a + 1 && few_singles) {
    r.label = InputClass::C;
  }
  return r;
}

}  // namespace lossyboson
