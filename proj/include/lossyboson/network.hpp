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

// Lossy beam-splitter meshes: construction, shortest input-output paths,
// extraction of a front layer of nonuniform losses, and composition into a
// single (possibly dilated) unitary.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lossyboson/complexmat.hpp"
#include "lossyboson/errors.hpp"
#include "lossyboson/random.hpp"

namespace lossyboson {

// Two-mode element. `modes` are 1-based and ordered (first, second); `eta`
// holds the transmissivity of the loss element on each input arm.
struct BeamSplitterElement {
  int layer = 0;
  std::array<int, 2> modes{1, 2};
  double theta = std::numbers::pi / 4;
  double phi = 0.0;
  std::array<double, 2> eta{1.0, 1.0};

  // Row = output arm, column = input arm; index 0 is modes[0].
  std::array<std::array<cplx, 2>, 2> block() const {
    const cplx ph = std::polar(1.0, phi);
    return {{{ph * std::cos(theta), -std::sin(theta)}, {ph * std::sin(theta), std::cos(theta)}}};
  }

  bool lossless() const { return eta[0] == 1.0 && eta[1] == 1.0; }

  friend bool operator==(const BeamSplitterElement&, const BeamSplitterElement&) = default;
};

// Single-mode loss applied after every element of layer `after_layer`.
struct StandaloneLoss {
  int after_layer = -1;
  int mode = 1;
  double eta = 1.0;

  friend bool operator==(const StandaloneLoss&, const StandaloneLoss&) = default;
};

inline void check_transmissivity(double eta, const char* what) {
  if (!(eta > 0.0 && eta <= 1.0)) throw RangeError(std::string(what) + ": transmissivity must lie in (0, 1]");
}

class LossVector {
 public:
  explicit LossVector(std::vector<double> eta) : eta_(std::move(eta)) {
    for (double e : eta_) check_transmissivity(e, "loss vector");
  }
  static LossVector ones(int m) { return LossVector(std::vector<double>(static_cast<std::size_t>(m), 1.0)); }

  int modes() const { return static_cast<int>(eta_.size()); }
  double operator[](std::size_t i) const { return eta_[i]; }
  const std::vector<double>& values() const { return eta_; }

  friend bool operator==(const LossVector&, const LossVector&) = default;

 private:
  std::vector<double> eta_;
};

class LossyNetwork {
 public:
  // One step of the time-ordered schedule.
  struct Event {
    bool is_element;
    std::size_t index;  // into elements() or standalone_losses()
  };

  explicit LossyNetwork(int modes, std::vector<BeamSplitterElement> elements = {},
                        std::vector<StandaloneLoss> losses = {})
      : modes_(modes), elements_(std::move(elements)), losses_(std::move(losses)) {
    if (modes_ < 1) throw DimensionError("network needs at least one mode");
    std::set<std::pair<int, int>> used;  // (layer, mode)
    for (const auto& e : elements_) {
      for (int k : e.modes)
        if (k < 1 || k > modes_) throw RangeError("element mode out of range");
      if (e.modes[0] == e.modes[1]) throw RangeError("element acts on two distinct modes");
      for (double t : e.eta) check_transmissivity(t, "element arm");
      if (!std::isfinite(e.theta) || !std::isfinite(e.phi)) throw RangeError("element angles must be finite");
      for (int k : e.modes)
        if (!used.insert({e.layer, k}).second)
          throw RangeError("elements within layer " + std::to_string(e.layer) + " overlap on mode " +
                           std::to_string(k));
    }
    for (const auto& l : losses_) {
      if (l.mode < 1 || l.mode > modes_) throw RangeError("standalone loss mode out of range");
      check_transmissivity(l.eta, "standalone loss");
    }
  }

  int modes() const { return modes_; }
  const std::vector<BeamSplitterElement>& elements() const { return elements_; }
  const std::vector<StandaloneLoss>& standalone_losses() const { return losses_; }

  bool lossless() const {
    return std::all_of(elements_.begin(), elements_.end(), [](const auto& e) { return e.lossless(); }) &&
           std::all_of(losses_.begin(), losses_.end(), [](const auto& l) { return l.eta == 1.0; });
  }

  // Elements of layer d come before standalone losses with after_layer == d;
  // ties keep insertion order.
  std::vector<Event> schedule() const {
    struct Keyed {
      int layer;
      int kind;
      std::size_t index;
    };
    std::vector<Keyed> keys;
    keys.reserve(elements_.size() + losses_.size());
    for (std::size_t i = 0; i < elements_.size(); ++i) keys.push_back({elements_[i].layer, 0, i});
    for (std::size_t i = 0; i < losses_.size(); ++i) keys.push_back({losses_[i].after_layer, 1, i});
    std::stable_sort(keys.begin(), keys.end(), [](const Keyed& a, const Keyed& b) {
      return a.layer != b.layer ? a.layer < b.layer : a.kind < b.kind;
    });
    std::vector<Event> out;
    out.reserve(keys.size());
    for (const auto& k : keys) out.push_back({k.kind == 0, k.index});
    return out;
  }

  // A layer index strictly before everything in the network.
  int front_layer() const {
    int lo = 0;
    for (const auto& e : elements_) lo = std::min(lo, e.layer);
    for (const auto& l : losses_) lo = std::min(lo, l.after_layer + 1);
    return lo - 1;
  }

  int back_layer() const {
    int hi = -1;
    for (const auto& e : elements_) hi = std::max(hi, e.layer);
    for (const auto& l : losses_) hi = std::max(hi, l.after_layer);
    return hi;
  }

  friend bool operator==(const LossyNetwork&, const LossyNetwork&) = default;

 private:
  int modes_;
  std::vector<BeamSplitterElement> elements_;
  std::vector<StandaloneLoss> losses_;
};

// ---------------------------------------------------------------------------
// Builders

namespace detail {

// Places each pair in the earliest layer after the last use of either mode.
inline std::vector<BeamSplitterElement> schedule_pairs(int m, const std::vector<std::array<int, 2>>& pairs,
                                                       double eta, std::uint64_t seed) {
  check_transmissivity(eta, "builder");
  Rng rng(seed);
  std::vector<int> last(static_cast<std::size_t>(m + 1), -1);
  std::vector<BeamSplitterElement> out;
  for (const auto& p : pairs) {
    BeamSplitterElement e;
    e.modes = p;
    e.layer = std::max(last[static_cast<std::size_t>(p[0])], last[static_cast<std::size_t>(p[1])]) + 1;
    last[static_cast<std::size_t>(p[0])] = last[static_cast<std::size_t>(p[1])] = e.layer;
    // Reflectivity sin^2(theta) uniform on [0, 1].
    e.theta = std::asin(std::sqrt(rng.uniform()));
    e.phi = 2.0 * std::numbers::pi * rng.uniform();
    e.eta = {eta, eta};
    out.push_back(e);
  }
  return out;
}

}  // namespace detail

// Triangular mesh of m(m-1)/2 nearest-neighbour elements. Diagonal k
// (k = 1..m-1) runs over the pairs (m-k, m-k+1), ..., (m-1, m). Mode 1 is the
// bottom of the triangle: its shortest path crosses one element, and the
// shortest path grows by one per mode up to m-1.
inline LossyNetwork build_reck(int m, double eta, std::uint64_t seed = kDefaultSeed) {
  if (m < 2) throw DimensionError("a mesh needs at least two modes");
  std::vector<std::array<int, 2>> pairs;
  for (int k = 1; k < m; ++k)
    for (int p = m - k; p < m; ++p) pairs.push_back({p, p + 1});
  return LossyNetwork(m, detail::schedule_pairs(m, pairs, eta, seed));
}

// Rectangular mesh: m layers alternating between pairs (1,2),(3,4),... and
// (2,3),(4,5),...; m(m-1)/2 elements.
inline LossyNetwork build_clements(int m, double eta, std::uint64_t seed = kDefaultSeed) {
  if (m < 2) throw DimensionError("a mesh needs at least two modes");
  std::vector<std::array<int, 2>> pairs;
  for (int d = 0; d < m; ++d)
    for (int p = (d % 2 == 0) ? 1 : 2; p + 1 <= m; p += 2) pairs.push_back({p, p + 1});
  auto elements = detail::schedule_pairs(m, pairs, eta, seed);
  return LossyNetwork(m, std::move(elements));
}

// ---------------------------------------------------------------------------
// Analysis

// s_i: fewest elements crossed from input i (0-based index) to any output.
// Backward pass: e = 0 at the outputs; an element on (a, b) sets both to
// min(e_a, e_b) + 1.
inline std::vector<int> shortest_paths(const LossyNetwork& net) {
  std::vector<int> e(static_cast<std::size_t>(net.modes()), 0);
  const auto sched = net.schedule();
  for (auto it = sched.rbegin(); it != sched.rend(); ++it) {
    if (!it->is_element) continue;
    const auto& el = net.elements()[it->index];
    auto& ea = e[static_cast<std::size_t>(el.modes[0] - 1)];
    auto& eb = e[static_cast<std::size_t>(el.modes[1] - 1)];
    ea = eb = std::min(ea, eb) + 1;
  }
  return e;
}

struct ExtractionResult {
  LossVector front;
  LossyNetwork residual;
  std::vector<int> exponents;    // shortest-path lengths s_i
  std::uint64_t operations = 0;  // bookkeeping steps performed
};

// Rewrites the network as (front losses) followed by a residual network.
//
// The network is rebuilt from its last event backwards while keeping the
// pulled losses mu as a layer in front. A standalone loss folds into mu. For an
// element on (a, b) the common part max(mu_a, mu_b) commutes through it; the
// lossier mode keeps min/max as a standalone loss right after the element, and
// the arm losses join the front:
//   mu_a' = eta_a * max(mu_a, mu_b),  mu_b' = eta_b * max(mu_a, mu_b).
// Equal values deposit nothing. Every input therefore keeps one lossless path
// through the residual, and mu_i ends up as the largest path transmissivity
// from input i (eta^{s_i} when all arms share eta).
inline ExtractionResult extract_losses(const LossyNetwork& net) {
  const int m = net.modes();
  std::vector<double> mu(static_cast<std::size_t>(m), 1.0);
  std::vector<int> depth(static_cast<std::size_t>(m), 0);
  std::vector<BeamSplitterElement> elements;
  std::vector<StandaloneLoss> deposits;
  std::uint64_t ops = 0;

  const auto sched = net.schedule();
  for (auto it = sched.rbegin(); it != sched.rend(); ++it) {
    ++ops;
    if (!it->is_element) {
      const auto& l = net.standalone_losses()[it->index];
      mu[static_cast<std::size_t>(l.mode - 1)] *= l.eta;
      continue;
    }
    const auto& el = net.elements()[it->index];
    const std::size_t a = static_cast<std::size_t>(el.modes[0] - 1);
    const std::size_t b = static_cast<std::size_t>(el.modes[1] - 1);
    const double common = std::max(mu[a], mu[b]);
    if (mu[a] < common) deposits.push_back({el.layer, el.modes[0], mu[a] / common});
    if (mu[b] < common) deposits.push_back({el.layer, el.modes[1], mu[b] / common});
    mu[a] = el.eta[0] * common;
    mu[b] = el.eta[1] * common;
    depth[a] = depth[b] = std::min(depth[a], depth[b]) + 1;

    BeamSplitterElement clean = el;
    clean.eta = {1.0, 1.0};
    elements.push_back(clean);
  }
  std::reverse(elements.begin(), elements.end());
  std::reverse(deposits.begin(), deposits.end());
  return {LossVector(std::move(mu)), LossyNetwork(m, std::move(elements), std::move(deposits)), std::move(depth),
          ops};
}

// Same backward iteration; per-element arm values may all differ.
inline ExtractionResult extract_losses_heterogeneous(const LossyNetwork& net) { return extract_losses(net); }

// Folds state-preparation losses into the front and detection losses into the
// tail of the residual.
inline ExtractionResult compose_io_losses(const ExtractionResult& r, const LossVector& eta_in,
                                          const LossVector& eta_out) {
  const int m = r.front.modes();
  if (eta_in.modes() != m || eta_out.modes() != m) throw DimensionError("loss vector length differs from mode count");
  std::vector<double> front(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) front[static_cast<std::size_t>(i)] = eta_in[static_cast<std::size_t>(i)] * r.front[static_cast<std::size_t>(i)];
  auto losses = r.residual.standalone_losses();
  const int tail = r.residual.back_layer() + 1;
  for (int i = 0; i < m; ++i)
    if (eta_out[static_cast<std::size_t>(i)] < 1.0) losses.push_back({tail, i + 1, eta_out[static_cast<std::size_t>(i)]});
  return {LossVector(std::move(front)), LossyNetwork(m, r.residual.elements(), std::move(losses)), r.exponents,
          r.operations};
}

// The network preceded by single-mode losses `front` (entries of 1 are skipped).
inline LossyNetwork with_front_losses(const LossyNetwork& net, const LossVector& front) {
  if (front.modes() != net.modes()) throw DimensionError("loss vector length differs from mode count");
  const int layer = net.front_layer();
  std::vector<StandaloneLoss> losses;
  for (int i = 0; i < net.modes(); ++i)
    if (front[static_cast<std::size_t>(i)] < 1.0) losses.push_back({layer, i + 1, front[static_cast<std::size_t>(i)]});
  losses.insert(losses.end(), net.standalone_losses().begin(), net.standalone_losses().end());
  return LossyNetwork(net.modes(), net.elements(), std::move(losses));
}

// ---------------------------------------------------------------------------
// Composition

namespace detail {

// u <- G u where G acts as `blk` on rows (a, b).
inline void apply_two_mode(CMatrix& u, int a, int b, const std::array<std::array<cplx, 2>, 2>& blk) {
  for (int c = 0; c < u.cols(); ++c) {
    const cplx x = u(a, c);
    const cplx y = u(b, c);
    u(a, c) = blk[0][0] * x + blk[0][1] * y;
    u(b, c) = blk[1][0] * x + blk[1][1] * y;
  }
}

inline std::array<std::array<cplx, 2>, 2> loss_block(double eta) {
  const double t = std::sqrt(eta);
  const double r = std::sqrt(1.0 - eta);
  return {{{t, -r}, {r, t}}};
}

}  // namespace detail

inline UnitaryMatrix compose_unitary(const LossyNetwork& net) {
  if (!net.lossless()) throw RangeError("compose_unitary called on a lossy network");
  CMatrix u = CMatrix::identity(net.modes());
  for (const auto& ev : net.schedule()) {
    if (!ev.is_element) continue;
    const auto& el = net.elements()[ev.index];
    detail::apply_two_mode(u, el.modes[0] - 1, el.modes[1] - 1, el.block());
  }
  return UnitaryMatrix(std::move(u));
}

struct DilatedNetwork {
  UnitaryMatrix unitary;  // system modes first, then environment modes
  int system_modes;
  int environment_modes;
};

inline int count_loss_elements(const LossyNetwork& net) {
  int e = 0;
  for (const auto& el : net.elements())
    for (double t : el.eta) e += t < 1.0;
  for (const auto& l : net.standalone_losses()) e += l.eta < 1.0;
  return e;
}

// Each loss element of transmissivity eta < 1 becomes a beam splitter that
// sends amplitude sqrt(1 - eta) into its own fresh environment mode.
inline DilatedNetwork dilate(const LossyNetwork& net) {
  const int m = net.modes();
  const int env = count_loss_elements(net);
  CMatrix u = CMatrix::identity(m + env);
  int next_env = m;
  auto lose = [&](int mode, double eta) {
    if (eta < 1.0) detail::apply_two_mode(u, mode, next_env++, detail::loss_block(eta));
  };
  for (const auto& ev : net.schedule()) {
    if (ev.is_element) {
      const auto& el = net.elements()[ev.index];
      lose(el.modes[0] - 1, el.eta[0]);
      lose(el.modes[1] - 1, el.eta[1]);
      detail::apply_two_mode(u, el.modes[0] - 1, el.modes[1] - 1, el.block());
    } else {
      const auto& l = net.standalone_losses()[ev.index];
      lose(l.mode - 1, l.eta);
    }
  }
  return {UnitaryMatrix(std::move(u)), m, env};
}

}  // namespace lossyboson
