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

// Brute-force ground truth for desk-scale instances: exhaustive outcome
// distributions, lossy distributions by unitary dilation, dense partial traces,
// path enumeration and statistical distances.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "lossyboson/complexmat.hpp"
#include "lossyboson/errors.hpp"
#include "lossyboson/fock.hpp"
#include "lossyboson/network.hpp"

namespace lossyboson {

using Distribution = std::map<OccupationVector, double>;

// Size limits of the brute-force paths. The environment variable
// LOSSY_BOSON_DESK_LIMITS ("key=value,key=value") overrides the defaults when
// read through from_environment().
struct DeskLimits {
  int exact_max_photons = 6;
  int exact_max_modes = 8;
  int dilated_max_modes = 12;  // system plus environment modes
  int dilated_max_photons = 4;
  int trace_max_photons = 5;
  int trace_max_modes = 4;
  long trace_max_entries = 1024;  // m^n

  static DeskLimits from_string(const std::string& spec) { return from_string(spec, DeskLimits{}); }

  static DeskLimits from_string(const std::string& spec, DeskLimits base) {
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item.empty()) continue;
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw ParseError("desk limit entry without '=': " + item);
      const std::string key = item.substr(0, eq);
      long value = 0;
      try {
        value = std::stol(item.substr(eq + 1));
      } catch (const std::exception&) {
        throw ParseError("desk limit value is not an integer: " + item);
      }
      if (key == "exact_max_photons") base.exact_max_photons = static_cast<int>(value);
      else if (key == "exact_max_modes") base.exact_max_modes = static_cast<int>(value);
      else if (key == "dilated_max_modes") base.dilated_max_modes = static_cast<int>(value);
      else if (key == "dilated_max_photons") base.dilated_max_photons = static_cast<int>(value);
      else if (key == "trace_max_photons") base.trace_max_photons = static_cast<int>(value);
      else if (key == "trace_max_modes") base.trace_max_modes = static_cast<int>(value);
      else if (key == "trace_max_entries") base.trace_max_entries = value;
      else throw ParseError("unknown desk limit: " + key);
    }
    return base;
  }

  static DeskLimits from_environment() {
    const char* env = std::getenv("LOSSY_BOSON_DESK_LIMITS");
    return env ? from_string(env) : DeskLimits{};
  }
};

struct ExactDistribution {
  Distribution entries;
  int total_photons = 0;

  double total() const {
    double s = 0.0;
    for (const auto& [k, p] : entries) s += p;
    return s;
  }
};

// Per(M) as the plain sum over all n! permutations.
inline cplx permanent_naive(const CMatrix& m) {
  if (!m.square()) throw DimensionError("permanent needs a square matrix");
  const int n = m.rows();
  if (n > 10) throw LimitError("naive permanent limited to n <= 10");
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  cplx acc{};
  do {
    cplx p = 1.0;
    for (int i = 0; i < n; ++i) p *= m(i, perm[static_cast<std::size_t>(i)]);
    acc += p;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return acc;
}

// Every n-photon outcome with p(T) = |Per(U_{S,T})|^2 / (prod s! prod t!),
// evaluated with Glynn's formula on the explicit submatrix.
inline ExactDistribution exact_distribution(const UnitaryMatrix& u, const OccupationVector& s,
                                            const DeskLimits& limits = {}) {
  if (s.modes() != u.dim()) throw DimensionError("input length differs from unitary dimension");
  if (s.photons() > limits.exact_max_photons || u.dim() > limits.exact_max_modes)
    throw LimitError("exact_distribution beyond desk limits");
  ExactDistribution d;
  d.total_photons = s.photons();
  const double sf = product_of_factorials(s);
  for_each_occupation(s.photons(), u.dim(), [&](const OccupationVector& t) {
    const cplx per = permanent_exact(build_submatrix(u, s, t));
    d.entries.emplace(t, std::norm(per) / (sf * product_of_factorials(t)));
  });
  return d;
}

// Exact output distribution of a lossy network, over every surviving photon
// number, from the dilated unitary with the environment marginalized.
inline Distribution dilated_lossy_distribution(const LossyNetwork& net, const OccupationVector& s,
                                               const DeskLimits& limits = {}) {
  if (s.modes() != net.modes()) throw DimensionError("input length differs from network modes");
  const int env = count_loss_elements(net);
  const int total_modes = net.modes() + env;
  if (total_modes > limits.dilated_max_modes || s.photons() > limits.dilated_max_photons)
    throw LimitError("dilated_lossy_distribution beyond desk limits (" + std::to_string(total_modes) + " modes)");
  const DilatedNetwork d = dilate(net);
  std::vector<int> padded(s.vector());
  padded.resize(static_cast<std::size_t>(total_modes), 0);
  const OccupationVector big_s(std::move(padded));
  const double sf = product_of_factorials(big_s);

  Distribution out;
  const int m = net.modes();
  for_each_occupation(s.photons(), total_modes, [&](const OccupationVector& t) {
    const cplx per = permanent_exact(build_submatrix(d.unitary, big_s, t));
    const double p = std::norm(per) / (sf * product_of_factorials(t));
    std::vector<int> sys(t.vector().begin(), t.vector().begin() + m);
    out[OccupationVector(std::move(sys))] += p;
  });
  return out;
}

struct PartialTraceResult {
  std::map<OccupationVector, double> weights;  // keyed by removed content K
  double max_off_block = 0.0;   // largest |rho_ab| between different contents
  double max_residual = 0.0;    // |rho - sum_K w_K |D><D||_max
};

// Builds the symmetrized n-particle state of S densely (m^n amplitudes),
// traces out the last n - l particles and projects the reduced state onto the
// l-particle Dicke states.
inline PartialTraceResult partial_trace_weights(const OccupationVector& s, int l, const DeskLimits& limits = {}) {
  const int n = s.photons();
  const int m = s.modes();
  if (l < 1 || l > n) throw RangeError("partial_trace_weights: l must lie in [1, n]");
  if (n > limits.trace_max_photons || m > limits.trace_max_modes)
    throw LimitError("partial_trace_weights beyond desk limits");
  long dim = 1;
  for (int i = 0; i < n; ++i) dim *= m;
  if (dim > limits.trace_max_entries) throw LimitError("partial_trace_weights: m^n too large");

  auto content = [m](long index, int particles) {
    std::vector<int> c(static_cast<std::size_t>(m), 0);
    for (int k = 0; k < particles; ++k) {
      ++c[static_cast<std::size_t>(index % m)];
      index /= m;
    }
    return c;
  };

  const double amp = 1.0 / std::sqrt(std::exp(log_multinomial(n, s.values())));
  std::vector<double> psi(static_cast<std::size_t>(dim), 0.0);
  for (long i = 0; i < dim; ++i)
    if (content(i, n) == s.vector()) psi[static_cast<std::size_t>(i)] = amp;

  long kept = 1;
  for (int i = 0; i < l; ++i) kept *= m;
  const long traced = dim / kept;
  // Index = a * traced + c: the first l particles are the most significant digits.
  std::vector<double> rho(static_cast<std::size_t>(kept * kept), 0.0);
  for (long a = 0; a < kept; ++a)
    for (long b = 0; b < kept; ++b) {
      double acc = 0.0;
      for (long c = 0; c < traced; ++c)
        acc += psi[static_cast<std::size_t>(a * traced + c)] * psi[static_cast<std::size_t>(b * traced + c)];
      rho[static_cast<std::size_t>(a * kept + b)] = acc;
    }

  std::vector<std::vector<int>> contents(static_cast<std::size_t>(kept));
  for (long a = 0; a < kept; ++a) contents[static_cast<std::size_t>(a)] = content(a, l);

  PartialTraceResult out;
  std::map<std::vector<int>, std::vector<long>> groups;
  for (long a = 0; a < kept; ++a) groups[contents[static_cast<std::size_t>(a)]].push_back(a);
  std::vector<double> model(rho.size(), 0.0);
  for (const auto& [rem, idx] : groups) {
    // <D|rho|D> with D uniform over the arrangements of `rem`.
    const double norm = 1.0 / static_cast<double>(idx.size());
    double w = 0.0;
    for (long a : idx)
      for (long b : idx) w += rho[static_cast<std::size_t>(a * kept + b)];
    w *= norm;
    for (long a : idx)
      for (long b : idx) model[static_cast<std::size_t>(a * kept + b)] = w * norm;
    if (w == 0.0) continue;
    std::vector<int> removed(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) removed[static_cast<std::size_t>(i)] = s[static_cast<std::size_t>(i)] - rem[static_cast<std::size_t>(i)];
    out.weights[OccupationVector(std::move(removed))] = w;
  }
  for (long a = 0; a < kept; ++a)
    for (long b = 0; b < kept; ++b) {
      const double v = rho[static_cast<std::size_t>(a * kept + b)];
      if (contents[static_cast<std::size_t>(a)] != contents[static_cast<std::size_t>(b)])
        out.max_off_block = std::max(out.max_off_block, std::abs(v));
      out.max_residual = std::max(out.max_residual, std::abs(v - model[static_cast<std::size_t>(a * kept + b)]));
    }
  return out;
}

// 1/2 sum_x |p_x - q_x| over the union of supports.
inline double tv_distance(const Distribution& p, const Distribution& q) {
  double acc = 0.0;
  auto ip = p.begin();
  auto iq = q.begin();
  while (ip != p.end() || iq != q.end()) {
    if (iq == q.end() || (ip != p.end() && ip->first < iq->first)) {
      acc += std::abs(ip->second);
      ++ip;
    } else if (ip == p.end() || iq->first < ip->first) {
      acc += std::abs(iq->second);
      ++iq;
    } else {
      acc += std::abs(ip->second - iq->second);
      ++ip;
      ++iq;
    }
  }
  return 0.5 * acc;
}

inline Distribution empirical_distribution(const std::vector<OccupationVector>& samples) {
  Distribution d;
  if (samples.empty()) return d;
  const double w = 1.0 / static_cast<double>(samples.size());
  for (const auto& s : samples) d[s] += w;
  return d;
}

struct ChiSquareResult {
  bool passed = true;
  double statistic = 0.0;
  int degrees_of_freedom = 0;
  double p_value = 1.0;
};

// Pearson goodness of fit. Bins with expected count below 5 are pooled; a
// sample outside the expected support fails outright.
inline ChiSquareResult chi_square_test(const std::vector<OccupationVector>& samples, const ExactDistribution& expected,
                                       double significance) {
  std::vector<std::pair<OccupationVector, double>> support;
  for (const auto& [k, p] : expected.entries)
    if (p > 0.0) support.emplace_back(k, p);
  const double n = static_cast<double>(samples.size());
  if (samples.size() < 10 * support.size() || samples.empty())
    throw RangeError("chi_square_test needs at least 10 samples per outcome in the support");

  std::map<OccupationVector, double> observed;
  for (const auto& s : samples) observed[s] += 1.0;
  ChiSquareResult res;
  for (const auto& [k, c] : observed) {
    auto it = expected.entries.find(k);
    if (it == expected.entries.end() || it->second <= 0.0) {
      res.passed = false;
      res.statistic = std::numeric_limits<double>::infinity();
      res.p_value = 0.0;
      return res;
    }
  }

  struct Bin {
    double obs;
    double exp;
  };
  std::vector<Bin> bins;
  Bin pooled{0.0, 0.0};
  for (const auto& [k, p] : support) {
    const double e = n * p;
    const auto it = observed.find(k);
    const double o = it == observed.end() ? 0.0 : it->second;
    if (e < 5.0) {
      pooled.obs += o;
      pooled.exp += e;
    } else {
      bins.push_back({o, e});
    }
  }
  if (pooled.exp > 0.0) {
    if (pooled.exp < 5.0 && !bins.empty()) {
      auto smallest = std::min_element(bins.begin(), bins.end(), [](const Bin& a, const Bin& b) { return a.exp < b.exp; });
      smallest->obs += pooled.obs;
      smallest->exp += pooled.exp;
    } else {
      bins.push_back(pooled);
    }
  }
  res.degrees_of_freedom = static_cast<int>(bins.size()) - 1;
  if (res.degrees_of_freedom <= 0) return res;
  for (const auto& b : bins) res.statistic += (b.obs - b.exp) * (b.obs - b.exp) / b.exp;
  const boost::math::chi_squared_distribution<double> dist(res.degrees_of_freedom);
  res.p_value = boost::math::cdf(boost::math::complement(dist, res.statistic));
  res.passed = res.p_value >= significance;
  return res;
}

struct PathSummary {
  std::vector<int> min_length;      // fewest elements crossed, per input
  std::vector<double> max_product;  // largest transmissivity product, per input
  std::uint64_t paths = 0;
};

// Enumerates every input-output path explicitly. A path crossing an element
// pays the arm transmissivity of the arm it enters; standalone losses on the
// path's mode multiply in as well.
inline PathSummary enumerate_paths(const LossyNetwork& net) {
  const auto sched = net.schedule();
  const int m = net.modes();
  PathSummary out{std::vector<int>(static_cast<std::size_t>(m), std::numeric_limits<int>::max()),
                  std::vector<double>(static_cast<std::size_t>(m), 0.0), 0};
  std::function<void(int, std::size_t, int, int, double)> walk = [&](int input, std::size_t pos, int mode, int len,
                                                                     double prod) {
    for (; pos < sched.size(); ++pos) {
      const auto& ev = sched[pos];
      if (ev.is_element) {
        const auto& el = net.elements()[ev.index];
        const int arm = el.modes[0] == mode ? 0 : (el.modes[1] == mode ? 1 : -1);
        if (arm < 0) continue;
        const double p = prod * el.eta[static_cast<std::size_t>(arm)];
        walk(input, pos + 1, el.modes[0], len + 1, p);
        walk(input, pos + 1, el.modes[1], len + 1, p);
        return;
      }
      const auto& l = net.standalone_losses()[ev.index];
      if (l.mode == mode) prod *= l.eta;
    }
    ++out.paths;
    auto& ml = out.min_length[static_cast<std::size_t>(input - 1)];
    auto& mp = out.max_product[static_cast<std::size_t>(input - 1)];
    ml = std::min(ml, len);
    mp = std::max(mp, prod);
  };
  for (int i = 1; i <= m; ++i) walk(i, 0, i, 0, 1.0);
  return out;
}

}  // namespace lossyboson
