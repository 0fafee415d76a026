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

// Chain-rule sampler for arbitrary (collision) Fock inputs.
//
// Outcomes are drawn photon by photon in first quantization: r_l is drawn from
// the unnormalized weights p(r_1, ..., r_{l-1}, x), x in [m], where the
// marginal of a prefix is a mixture over the l-photon sub-configurations of S.
#pragma once

#include <cmath>
#include <cstdint>
#include <exception>
#include <optional>
#include <thread>
#include <vector>

#include "lossyboson/complexmat.hpp"
#include "lossyboson/errors.hpp"
#include "lossyboson/fock.hpp"
#include "lossyboson/random.hpp"

namespace lossyboson {

inline constexpr double kNegativeWeightTolerance = 1e-12;

struct SampleOutcome {
  OccupationVector outcome;     // T
  double probability;           // p_U(S -> T)
  ModeAssignment prefix_trace;  // the raw tuple r in draw order
};

namespace detail {

struct WeightedSub {
  OccupationVector remaining;
  double coefficient;  // weight(K) / (l! prod (s_i - K_i)!)
};

inline std::vector<WeightedSub> marginal_terms(const OccupationVector& s, int l) {
  std::vector<WeightedSub> out;
  const double lf = factorial(l);
  for (auto& sub : subconfigurations(s, l))
    out.push_back({sub.remaining, sub.weight / (lf * product_of_factorials(sub.remaining))});
  return out;
}

inline double marginal_value(const CMatrix& u, const std::vector<WeightedSub>& terms,
                             const OccupationVector& prefix_occ, OpCounter* counter) {
  double acc = 0.0;
  for (const auto& t : terms) acc += t.coefficient * std::norm(permanent_repeated(u, t.remaining, prefix_occ, counter));
  return acc;
}

}  // namespace detail

// p(r_1, ..., r_l), summing |Per(U_{S-K, r})|^2 over the sub-configurations K.
// At l = n this is the tuple pmf |Per(U_{S,r})|^2 / (n! prod s_i!).
inline double marginal_pmf(const UnitaryMatrix& u, const OccupationVector& s, const ModeAssignment& prefix,
                           OpCounter* counter = nullptr) {
  if (s.modes() != u.dim()) throw DimensionError("input length differs from unitary dimension");
  const int l = static_cast<int>(prefix.size());
  if (l < 1 || l > s.photons()) throw RangeError("prefix length must lie in [1, n]");
  const auto prefix_occ = to_occupation(prefix, u.dim());
  return detail::marginal_value(u.matrix(), detail::marginal_terms(s, l), prefix_occ, counter);
}

// Index chosen by inverse CDF over the prefix sums of `weights` with one
// uniform draw.
inline std::size_t draw_categorical(const std::vector<double>& weights, double u01) {
  double total = 0.0;
  for (double w : weights) total += w;
  const double target = u01 * total;
  double cum = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    cum += weights[i];
    last_positive = i;
    if (target < cum) return i;
  }
  return last_positive;
}

inline SampleOutcome sample(const UnitaryMatrix& u, const OccupationVector& s, Rng& rng,
                            OpCounter* counter = nullptr) {
  const int m = u.dim();
  if (s.modes() != m) throw DimensionError("input length differs from unitary dimension");
  const int n = s.photons();
  if (n < 1) throw RangeError("sampling needs at least one photon");

  std::vector<int> t(static_cast<std::size_t>(m), 0);
  ModeAssignment r;
  std::vector<double> weights(static_cast<std::size_t>(m));
  double chosen_weight = 0.0;

  for (int l = 1; l <= n; ++l) {
    // Shared by all m candidates of this step.
    const auto terms = detail::marginal_terms(s, l);
    double total = 0.0;
    for (int x = 0; x < m; ++x) {
      ++t[static_cast<std::size_t>(x)];
      double w = detail::marginal_value(u.matrix(), terms, OccupationVector(t), counter);
      --t[static_cast<std::size_t>(x)];
      if (w < 0.0) {
        if (w < -kNegativeWeightTolerance) throw NumericalError("negative marginal weight");
        w = 0.0;
      }
      weights[static_cast<std::size_t>(x)] = w;
      total += w;
    }
    if (!(total > 0.0)) throw NumericalError("all sampling weights vanished at step " + std::to_string(l));
    const std::size_t x = draw_categorical(weights, rng.uniform());
    ++t[x];
    r.push_back(static_cast<int>(x) + 1);
    chosen_weight = weights[x];
  }

  OccupationVector outcome(std::move(t));
  // p(T) = p(r) * (number of tuples reordering to T).
  const double arrangements = factorial(n) / product_of_factorials(outcome);
  return {std::move(outcome), chosen_weight * arrangements, std::move(r)};
}

struct BatchReport {
  std::uint64_t shots = 0;
  std::uint64_t permanent_evaluations = 0;
  std::uint64_t max_permanents_per_sample = 0;
  std::uint64_t permanent_bound_per_sample = 0;  // m * (prod(s_i+1) - 1)
  double runtime_bound = 0.0;                    // n m prod(s_j+1)^2 alpha_S
  std::uint64_t terms = 0;
  std::uint64_t complex_ops = 0;
};

struct BatchResult {
  std::vector<SampleOutcome> samples;
  BatchReport report;
};

// Shot i uses its own stream seeded by substream_seed(seed, i), so the output
// does not depend on `threads`.
inline BatchResult sample_batch(const UnitaryMatrix& u, const OccupationVector& s, std::uint64_t shots,
                                std::uint64_t seed, unsigned threads = 1) {
  if (shots < 1) throw RangeError("shots must be >= 1");
  if (s.modes() != u.dim()) throw DimensionError("input length differs from unitary dimension");
  std::vector<std::optional<SampleOutcome>> slots(shots);
  std::vector<OpCounter> counters(shots);

  auto run_range = [&](std::uint64_t begin, std::uint64_t end) {
    for (std::uint64_t i = begin; i < end; ++i) {
      Rng rng(substream_seed(seed, i));
      slots[i] = sample(u, s, rng, &counters[i]);
    }
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::min<std::uint64_t>(shots, 256))));
  if (threads == 1) {
    run_range(0, shots);
  } else {
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    const std::uint64_t chunk = (shots + threads - 1) / threads;
    for (unsigned w = 0; w < threads; ++w) {
      const std::uint64_t b = std::min<std::uint64_t>(shots, w * chunk);
      const std::uint64_t e = std::min<std::uint64_t>(shots, b + chunk);
      pool.emplace_back([&, w, b, e] {
        try {
          run_range(b, e);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& err : errors)
      if (err) std::rethrow_exception(err);
  }

  BatchResult out;
  out.samples.reserve(shots);
  for (auto& slot : slots) out.samples.push_back(std::move(*slot));
  auto& rep = out.report;
  rep.shots = shots;
  for (const auto& c : counters) {
    rep.permanent_evaluations += c.permanents;
    rep.max_permanents_per_sample = std::max(rep.max_permanents_per_sample, c.permanents);
    rep.terms += c.terms;
    rep.complex_ops += c.complex_ops;
  }
  rep.permanent_bound_per_sample = static_cast<std::uint64_t>(u.dim()) * (s.product_plus_one() - 1);
  rep.runtime_bound = sampler_runtime_bound(s);
  return out;
}

}  // namespace lossyboson
