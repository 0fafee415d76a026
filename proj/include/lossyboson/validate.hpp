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

// Invariant batteries behind `validate <suite>`. Each check compares a library
// path against an independent brute-force oracle.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "lossyboson/complexmat.hpp"
#include "lossyboson/errors.hpp"
#include "lossyboson/fock.hpp"
#include "lossyboson/lossy.hpp"
#include "lossyboson/network.hpp"
#include "lossyboson/oracle.hpp"
#include "lossyboson/random.hpp"
#include "lossyboson/sampler.hpp"

namespace lossyboson {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SuiteReport {
  std::string suite;
  std::vector<CheckResult> checks;
  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
  }
};

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"permanents", "marginals", "extraction", "sampler", "lossy"};
  return names;
}

inline std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// Occupation vector with n photons on m modes, each photon placed uniformly.
inline OccupationVector random_occupation(int n, int m, Rng& rng) {
  std::vector<int> v(static_cast<std::size_t>(m), 0);
  for (int i = 0; i < n; ++i) ++v[static_cast<std::size_t>(rng.next() % static_cast<std::uint64_t>(m))];
  return OccupationVector(std::move(v));
}

// Random network of `count` elements on neighbouring or distant mode pairs.
// Arm transmissivities are drawn from [0.5, 1] with a third of them lossless;
// some standalone losses are sprinkled in.
inline LossyNetwork random_lossy_network(int m, int count, Rng& rng, bool uniform_eta = false, double eta = 0.9) {
  std::vector<BeamSplitterElement> elements;
  std::vector<int> busy_until(static_cast<std::size_t>(m), -1);
  auto draw_eta = [&] {
    if (uniform_eta) return eta;
    return rng.uniform() < 1.0 / 3.0 ? 1.0 : 0.5 + 0.5 * rng.uniform();
  };
  for (int e = 0; e < count; ++e) {
    const int a = static_cast<int>(rng.next() % static_cast<std::uint64_t>(m));
    int b = static_cast<int>(rng.next() % static_cast<std::uint64_t>(m - 1));
    if (b >= a) ++b;
    BeamSplitterElement el;
    el.modes = {std::min(a, b) + 1, std::max(a, b) + 1};
    el.layer = std::max(busy_until[static_cast<std::size_t>(a)], busy_until[static_cast<std::size_t>(b)]) + 1;
    busy_until[static_cast<std::size_t>(a)] = busy_until[static_cast<std::size_t>(b)] = el.layer;
    el.theta = std::asin(std::sqrt(rng.uniform()));
    el.phi = 2.0 * std::numbers::pi * rng.uniform();
    el.eta = {draw_eta(), draw_eta()};
    elements.push_back(el);
  }
  std::vector<StandaloneLoss> losses;
  if (!uniform_eta && rng.uniform() < 0.5) {
    int last = 0;
    for (int v : busy_until) last = std::max(last, v);
    losses.push_back({static_cast<int>(rng.next() % static_cast<std::uint64_t>(last + 2)) - 1,
                      static_cast<int>(rng.next() % static_cast<std::uint64_t>(m)) + 1, 0.5 + 0.5 * rng.uniform()});
  }
  return LossyNetwork(m, std::move(elements), std::move(losses));
}

namespace detail {

inline double relative_error(cplx a, cplx b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

inline void record(SuiteReport& r, std::string name, bool ok, std::string detail) {
  r.checks.push_back({std::move(name), ok, std::move(detail)});
}

inline SuiteReport suite_permanents(std::uint64_t seed) {
  SuiteReport rep{"permanents", {}};
  Rng rng(seed);
  double worst = 0.0;
  int cases = 0;
  for (int trial = 0; trial < 120; ++trial) {
    const int m = 2 + static_cast<int>(rng.next() % 4);
    const int n = 1 + static_cast<int>(rng.next() % 5);
    const UnitaryMatrix u = UnitaryMatrix::random(m, rng.next());
    const OccupationVector s = random_occupation(n, m, rng), t = random_occupation(n, m, rng);
    const CMatrix sub = build_submatrix(u, s, t);
    const cplx naive = permanent_naive(sub);
    worst = std::max({worst, relative_error(permanent_repeated(u, s, t), naive),
                      relative_error(permanent_exact(sub), naive)});
    ++cases;
  }
  record(rep, "repeated and Glynn permanents match the permutation sum", worst < 1e-9,
         std::to_string(cases) + " cases, worst relative error " + format_value(worst));

  const LossyNetwork hom(2, {BeamSplitterElement{}}, {});
  const UnitaryMatrix bs = compose_unitary(hom);
  const OccupationVector one_one({1, 1});
  const double p11 = transition_probability(bs, one_one, one_one);
  const double p20 = transition_probability(bs, one_one, OccupationVector({2, 0}));
  record(rep, "Hong-Ou-Mandel dip", std::abs(p11) < 1e-12 && std::abs(p20 - 0.5) < 1e-12,
         "p(1,1)=" + format_value(p11) + " p(2,0)=" + format_value(p20));

  const UnitaryMatrix id = UnitaryMatrix::identity(4);
  const OccupationVector s({2, 0, 1, 1});
  const double pid = transition_probability(id, s, s);
  record(rep, "identity keeps its input", std::abs(pid - 1.0) < 1e-12, "p=" + format_value(pid));
  return rep;
}

// Every ordered prefix reachable with nonzero marginal, visited depth first.
inline void for_each_prefix(int m, int n, const std::function<void(const ModeAssignment&)>& fn) {
  std::function<void(ModeAssignment&)> rec = [&](ModeAssignment& r) {
    fn(r);
    if (static_cast<int>(r.size()) == n) return;
    for (int x = 1; x <= m; ++x) {
      ModeAssignment next = r;
      next.push_back(x);
      rec(next);
    }
  };
  for (int x = 1; x <= m; ++x) {
    ModeAssignment r;
    r.push_back(x);
    rec(r);
  }
}

inline SuiteReport suite_marginals(std::uint64_t seed, const DeskLimits& limits) {
  SuiteReport rep{"marginals", {}};
  Rng rng(seed);
  const std::vector<OccupationVector> inputs = {
      OccupationVector({2, 1, 0}),    OccupationVector({3, 1, 0, 0}), OccupationVector({2, 2, 0}),
      OccupationVector({1, 1, 1, 0}), OccupationVector({4, 0, 0}),    OccupationVector({1, 0, 2, 1})};
  double chain = 0.0, suffix = 0.0;
  for (const auto& s : inputs) {
    const int m = s.modes(), n = s.photons();
    const UnitaryMatrix u = UnitaryMatrix::random(m, rng.next());
    // Brute-force tuple pmf for every full tuple.
    std::map<std::vector<int>, double> full;
    for_each_prefix(m, n, [&](const ModeAssignment& r) {
      if (static_cast<int>(r.size()) != n) return;
      const CMatrix sub = build_submatrix(u, s, r);
      full[std::vector<int>(r.entries().begin(), r.entries().end())] =
          std::norm(permanent_naive(sub)) / (factorial(n) * product_of_factorials(s));
    });
    double first_total = 0.0;
    for_each_prefix(m, n, [&](const ModeAssignment& r) {
      const double p = marginal_pmf(u, s, r);
      const auto key = std::vector<int>(r.entries().begin(), r.entries().end());
      if (r.size() == 1) first_total += p;
      double brute = 0.0;
      for (const auto& [tuple, q] : full)
        if (std::equal(key.begin(), key.end(), tuple.begin())) brute += q;
      suffix = std::max(suffix, std::abs(p - brute));
      if (static_cast<int>(r.size()) < n) {
        double children = 0.0;
        for (int x = 1; x <= m; ++x) {
          ModeAssignment next = r;
          next.push_back(x);
          children += marginal_pmf(u, s, next);
        }
        chain = std::max(chain, std::abs(children - p));
      }
    });
    chain = std::max(chain, std::abs(first_total - 1.0));
  }
  record(rep, "chain-rule sums close over every prefix", chain < 1e-10, "worst gap " + format_value(chain));
  record(rep, "prefix marginals equal brute-force suffix sums", suffix < 1e-10, "worst gap " + format_value(suffix));

  double weights = 0.0;
  int configs = 0;
  for (int n = 1; n <= std::min(5, limits.trace_max_photons); ++n)
    for (int m = 1; m <= std::min(4, limits.trace_max_modes); ++m) {
      if (std::pow(m, n) > static_cast<double>(limits.trace_max_entries)) continue;
      for_each_occupation(n, m, [&](const OccupationVector& s) {
        for (int l = 1; l <= n; ++l) {
          const auto trace = partial_trace_weights(s, l, limits);
          std::map<OccupationVector, double> mine;
          for (const auto& sub : subconfigurations(s, l)) mine[sub.removed] = sub.weight;
          for (const auto& [k, w] : trace.weights) weights = std::max(weights, std::abs(w - mine[k]));
          for (const auto& [k, w] : mine)
            if (!trace.weights.contains(k)) weights = std::max(weights, std::abs(w));
          weights = std::max({weights, trace.max_off_block, trace.max_residual});
          ++configs;
        }
      });
    }
  record(rep, "sub-configuration weights equal partial-trace weights", weights < 1e-10,
         std::to_string(configs) + " (S, l) pairs, worst gap " + format_value(weights));

  bool counts_ok = true;
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + static_cast<int>(rng.next() % 12);
    const OccupationVector s = random_occupation(n, 1 + static_cast<int>(rng.next() % 6), rng);
    std::uint64_t sum = 0;
    const auto c = count_subconfigurations(s);
    for (auto v : c) sum += v;
    for (int l = 1; l <= n && n <= 8; ++l)
      counts_ok = counts_ok && subconfigurations(s, l).size() == c[static_cast<std::size_t>(l - 1)];
    counts_ok = counts_ok && sum == s.product_plus_one() - 1;
  }
  record(rep, "sub-configuration counts sum to prod(s_i+1) - 1", counts_ok, "40 random inputs up to n = 12");
  return rep;
}

inline SuiteReport suite_extraction(std::uint64_t seed, DeskLimits limits) {
  SuiteReport rep{"extraction", {}};
  Rng rng(seed);
  limits.dilated_max_modes = std::max(limits.dilated_max_modes, 20);
  double worst = 0.0;
  int cases = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const int m = 2 + static_cast<int>(rng.next() % 3);
    const LossyNetwork net = random_lossy_network(m, 1 + static_cast<int>(rng.next() % 4), rng);
    const OccupationVector s = random_occupation(1 + static_cast<int>(rng.next() % 3), m, rng);
    const ExtractionResult ext = extract_losses(net);
    const LossyNetwork rebuilt = with_front_losses(ext.residual, ext.front);
    worst = std::max(worst, tv_distance(dilated_lossy_distribution(net, s, limits),
                                        dilated_lossy_distribution(rebuilt, s, limits)));
    ++cases;
  }
  record(rep, "front losses plus residual reproduce the network", worst < 1e-9,
         std::to_string(cases) + " networks, worst TV " + format_value(worst));

  bool paths = true;
  for (int trial = 0; trial < 30; ++trial) {
    const int m = 2 + static_cast<int>(rng.next() % 5);
    const LossyNetwork net = random_lossy_network(m, 1 + static_cast<int>(rng.next() % 8), rng, true, 0.9);
    const ExtractionResult ext = extract_losses(net);
    const PathSummary brute = enumerate_paths(net);
    for (int i = 0; i < m; ++i) {
      const auto k = static_cast<std::size_t>(i);
      const int expect = brute.min_length[k] == std::numeric_limits<int>::max() ? 0 : brute.min_length[k];
      paths = paths && ext.exponents[k] == expect && ext.exponents[k] == shortest_paths(net)[k];
      paths = paths && std::abs(ext.front[k] - brute.max_product[k]) < 1e-12;
    }
  }
  record(rep, "uniform-eta exponents equal path enumeration", paths, "30 random networks");

  bool reck = true;
  for (int m = 2; m <= 8; ++m) {
    const LossyNetwork net = build_reck(m, 0.9);
    const ExtractionResult ext = extract_losses(net);
    const PathSummary brute = enumerate_paths(net);
    for (int i = 0; i < m; ++i) reck = reck && ext.exponents[static_cast<std::size_t>(i)] == brute.min_length[static_cast<std::size_t>(i)];
    for (int i = 0; i + 2 < m; ++i) reck = reck && ext.exponents[static_cast<std::size_t>(i)] < ext.exponents[static_cast<std::size_t>(i + 1)];
  }
  record(rep, "Reck exponents grow from the bottom input", reck, "m = 2..8");
  return rep;
}

inline SuiteReport suite_sampler(std::uint64_t seed, const DeskLimits& limits) {
  SuiteReport rep{"sampler", {}};
  Rng rng(seed);
  const std::vector<OccupationVector> inputs = {OccupationVector({2, 1, 0}), OccupationVector({3, 1, 0, 0}),
                                                OccupationVector({1, 1, 1, 0}), OccupationVector({2, 0, 2})};
  bool chi = true, bound = true;
  double tv = 0.0;
  for (const auto& s : inputs) {
    const UnitaryMatrix u = UnitaryMatrix::random(s.modes(), rng.next());
    const ExactDistribution exact = exact_distribution(u, s, limits);
    const BatchResult batch = sample_batch(u, s, 20000, rng.next());
    std::vector<OccupationVector> outcomes;
    for (const auto& x : batch.samples) {
      outcomes.push_back(x.outcome);
      const double p = exact.entries.at(x.outcome);
      bound = bound && std::abs(x.probability - p) <= 1e-10;
    }
    chi = chi && chi_square_test(outcomes, exact, 1e-3).passed;
    tv = std::max(tv, tv_distance(empirical_distribution(outcomes), exact.entries));
    bound = bound && batch.report.max_permanents_per_sample <= batch.report.permanent_bound_per_sample;
  }
  record(rep, "chi-square does not reject the samples", chi, "4 inputs, 20000 shots each");
  record(rep, "empirical TV is small", tv < 0.03, "worst TV " + format_value(tv));
  record(rep, "reported probabilities and permanent counts", bound, "probability = exact p(T); count <= bound");
  return rep;
}

inline SuiteReport suite_lossy(std::uint64_t seed) {
  SuiteReport rep{"lossy", {}};
  double binom = 0.0, compose = 0.0;
  for (int n = 1; n <= 4; ++n)
    for (double eta : {0.1, 0.5, 0.93}) {
      std::vector<int> v(static_cast<std::size_t>(n), 1);
      v.push_back(0);
      const OccupationVector s(v);
      std::vector<double> by_count(static_cast<std::size_t>(n) + 1, 0.0);
      for (const auto& [r, p] : apply_loss_distribution(s, LossChannelSpec::uniform(s.modes(), eta)))
        by_count[static_cast<std::size_t>(r.photons())] += p;
      for (int k = 0; k <= n; ++k) {
        const double want = static_cast<double>(*binomial(n, k)) * std::pow(eta, k) * std::pow(1.0 - eta, n - k);
        binom = std::max(binom, std::abs(by_count[static_cast<std::size_t>(k)] - want));
      }
      const OccupationVector multi({n, 1, 0});
      const Distribution twice = apply_loss_distribution(
          apply_loss_distribution(multi, LossChannelSpec::uniform(3, eta)), LossChannelSpec::uniform(3, 0.7));
      compose = std::max(compose, tv_distance(twice, apply_loss_distribution(multi, LossChannelSpec::uniform(3, eta * 0.7))));
    }
  record(rep, "survivor count is binomial", binom < 1e-14, "worst gap " + format_value(binom));
  record(rep, "sequential losses compose multiplicatively", compose < 1e-14, "worst TV " + format_value(compose));

  const double spot = tv_bound(100, 0, 0.05).value;
  record(rep, "bound spot value", std::abs(spot - 0.14875) < 1e-12, "Delta=" + format_value(spot));

  const LossyNetwork net = build_reck(6, 0.8, seed);
  const OccupationVector s({1, 1, 1, 1, 0, 0});
  Rng a(seed), b(seed);
  const PipelineResult first = simulate_unbalanced(net, s, default_strategy(), 1.0, a);
  const PipelineResult second = simulate_unbalanced(net, s, default_strategy(), 1.0, b);
  record(rep, "pipeline is deterministic under a fixed seed",
         first.sample.outcome == second.sample.outcome && first.certificate.delta == second.certificate.delta,
         "outcome " + first.sample.outcome.to_string());
  return rep;
}

}  // namespace detail

inline SuiteReport run_suite(const std::string& name, std::uint64_t seed = kDefaultSeed,
                             const DeskLimits& limits = DeskLimits::from_environment()) {
  if (name == "permanents") return detail::suite_permanents(seed);
  if (name == "marginals") return detail::suite_marginals(seed, limits);
  if (name == "extraction") return detail::suite_extraction(seed, limits);
  if (name == "sampler") return detail::suite_sampler(seed, limits);
  if (name == "lossy") return detail::suite_lossy(seed);
  throw ParseError("unknown suite '" + name + "'");
}

}  // namespace lossyboson
