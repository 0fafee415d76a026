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

// Photon-loss channels, the total-variation bound calculators, and the
// approximate simulation pipeline for unbalanced lossy networks.
#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "lossyboson/complexmat.hpp"
#include "lossyboson/errors.hpp"
#include "lossyboson/fock.hpp"
#include "lossyboson/network.hpp"
#include "lossyboson/oracle.hpp"
#include "lossyboson/random.hpp"
#include "lossyboson/sampler.hpp"

namespace lossyboson {

class LossChannelSpec {
 public:
  enum class Kind { Uniform, Nonuniform, Partial };

  static LossChannelSpec uniform(int modes, double eta) {
    check(eta);
    return LossChannelSpec(Kind::Uniform, std::vector<double>(static_cast<std::size_t>(modes), eta), 0);
  }
  static LossChannelSpec nonuniform(std::vector<double> eta) {
    for (double e : eta) check(e);
    return LossChannelSpec(Kind::Nonuniform, std::move(eta), 0);
  }
  // (1, ..., 1, eta, ..., eta) with k leading lossless modes.
  static LossChannelSpec partial(int modes, int k, double eta) {
    check(eta);
    if (k < 0 || k > modes) throw RangeError("partial loss: k must lie in [0, m]");
    std::vector<double> v(static_cast<std::size_t>(modes), eta);
    for (int i = 0; i < k; ++i) v[static_cast<std::size_t>(i)] = 1.0;
    return LossChannelSpec(Kind::Partial, std::move(v), k);
  }

  Kind kind() const { return kind_; }
  int lossless_modes() const { return k_; }
  int modes() const { return static_cast<int>(eta_.size()); }
  double operator[](std::size_t i) const { return eta_[i]; }
  const std::vector<double>& transmissivities() const { return eta_; }

 private:
  LossChannelSpec(Kind kind, std::vector<double> eta, int k) : kind_(kind), eta_(std::move(eta)), k_(k) {
    if (eta_.empty()) throw DimensionError("loss channel needs at least one mode");
  }
  static void check(double eta) {
    if (!(eta >= 0.0 && eta <= 1.0)) throw RangeError("transmissivity must lie in [0, 1]");
  }

  Kind kind_;
  std::vector<double> eta_;
  int k_;
};

// Each photon in mode i survives independently with probability eta_i.
inline Distribution apply_loss_distribution(const OccupationVector& s, const LossChannelSpec& spec) {
  if (spec.modes() != s.modes()) throw DimensionError("loss channel length differs from mode count");
  Distribution out;
  const int m = s.modes();
  std::vector<int> r(static_cast<std::size_t>(m), 0);
  std::function<void(int, double)> rec = [&](int i, double p) {
    if (i == m) {
      if (p > 0.0) out[OccupationVector(r)] += p;
      return;
    }
    const int si = s[static_cast<std::size_t>(i)];
    const double eta = spec[static_cast<std::size_t>(i)];
    for (int k = 0; k <= si; ++k) {
      r[static_cast<std::size_t>(i)] = k;
      const double pk = static_cast<double>(*binomial(si, k)) * std::pow(eta, k) * std::pow(1.0 - eta, si - k);
      rec(i + 1, p * pk);
    }
    r[static_cast<std::size_t>(i)] = 0;
  };
  rec(0, 1.0);
  return out;
}

// Pushes a distribution over occupations through the loss channel.
inline Distribution apply_loss_distribution(const Distribution& d, const LossChannelSpec& spec) {
  Distribution out;
  for (const auto& [s, p] : d)
    for (const auto& [r, q] : apply_loss_distribution(s, spec)) out[r] += p * q;
  return out;
}

inline OccupationVector sample_survivors(const OccupationVector& s, const LossChannelSpec& spec, Rng& rng) {
  if (spec.modes() != s.modes()) throw DimensionError("loss channel length differs from mode count");
  std::vector<int> r(static_cast<std::size_t>(s.modes()), 0);
  for (int i = 0; i < s.modes(); ++i)
    for (int c = 0; c < s[static_cast<std::size_t>(i)]; ++c)
      r[static_cast<std::size_t>(i)] += rng.bernoulli(spec[static_cast<std::size_t>(i)]);
  return OccupationVector(std::move(r));
}

// ---------------------------------------------------------------------------

struct TVBound {
  double value = 0.0;    // leading + tail
  double leading = 0.0;  // eta^2 (n - k) / 2
  double tail = 0.0;     // eta (1 - eta) / 2
  double effective_eta = 0.0;
  std::optional<double> c_threshold;  // 1 / (2 ln(1/eta)) for network bounds
  bool vanishing = false;             // c above the threshold
};

// Distance to a classically simulable distribution when k of n single photons
// are lossless and the rest keep transmissivity eta.
inline TVBound tv_bound(int n, int k, double eta) {
  if (n < 0 || k < 0 || k > n) throw RangeError("tv_bound: need 0 <= k <= n");
  if (!(eta >= 0.0 && eta <= 1.0)) throw RangeError("tv_bound: eta must lie in [0, 1]");
  TVBound b;
  b.effective_eta = eta;
  b.leading = eta * eta * (n - k) / 2.0;
  b.tail = eta * (1.0 - eta) / 2.0;
  b.value = b.leading + b.tail;
  return b;
}

// Same bound with eta_eff = eta^{c ln n} = n^{-c ln(1/eta)}.
inline TVBound tv_bound_network(int n, int k, double eta, double c) {
  if (!(eta > 0.0 && eta < 1.0)) throw RangeError("tv_bound_network: eta must lie in (0, 1)");
  if (!(c >= 0.0) || !std::isfinite(c)) throw RangeError("tv_bound_network: c must be >= 0");
  if (n < 1) throw RangeError("tv_bound_network: n must be >= 1");
  const double eta_eff = std::pow(static_cast<double>(n), -c * std::log(1.0 / eta));
  TVBound b = tv_bound(n, k, eta_eff);
  b.c_threshold = 1.0 / (2.0 * std::log(1.0 / eta));
  b.vanishing = c > *b.c_threshold;
  return b;
}

// ---------------------------------------------------------------------------

struct StrategyRequest {
  int modes = 0;
  std::vector<int> lossless_modes;            // 1-based
  std::vector<int> lossless_occupations;      // photons in each lossless mode
  std::vector<int> lossy_modes;               // 1-based, ascending
  OccupationVector survivors = OccupationVector::vacuum(1);  // on all modes; zero outside lossy_modes
  int survivor_count = 0;
};

struct StrategyOutput {
  OccupationVector input = OccupationVector::vacuum(1);
  std::optional<CMatrix> pre_unitary;  // U_alpha, applied before the network
};

// Maps the surviving photons to a binned input. Must be a pure function of its
// request.
struct ApproximationStrategy {
  std::string name;
  std::function<StrategyOutput(const StrategyRequest&)> provider;
};

// All survivors go into the lowest lossy mode; no pre-network unitary.
inline ApproximationStrategy default_strategy() {
  return {"single-bin", [](const StrategyRequest& req) {
            std::vector<int> in(static_cast<std::size_t>(req.modes), 0);
            for (std::size_t i = 0; i < req.lossless_modes.size(); ++i)
              in[static_cast<std::size_t>(req.lossless_modes[i] - 1)] = req.lossless_occupations[i];
            if (req.survivor_count > 0) {
              if (req.lossy_modes.empty()) throw HypothesisError("survivors without a lossy mode to bin them into");
              in[static_cast<std::size_t>(req.lossy_modes.front() - 1)] += req.survivor_count;
            }
            return StrategyOutput{OccupationVector(std::move(in)), std::nullopt};
          }};
}

// Survivors stay in their own input modes. Nothing is approximated, so the
// pipeline then samples the lossy network exactly; useful as a reference.
inline ApproximationStrategy survivor_strategy() {
  return {"survivors", [](const StrategyRequest& req) {
            std::vector<int> in(req.survivors.vector());
            for (std::size_t i = 0; i < req.lossless_modes.size(); ++i)
              in[static_cast<std::size_t>(req.lossless_modes[i] - 1)] = req.lossless_occupations[i];
            return StrategyOutput{OccupationVector(std::move(in)), std::nullopt};
          }};
}

inline ApproximationStrategy strategy_by_name(const std::string& name) {
  if (name == "single-bin") return default_strategy();
  if (name == "survivors") return survivor_strategy();
  throw ParseError("unknown strategy '" + name + "'");
}

struct Certificate {
  int n = 0;
  int k = 0;
  double eta = 1.0;
  double eta_eff = 1.0;
  double c = 0.0;
  std::optional<double> c_threshold;
  double delta = 0.0;
  std::string strategy;
};

struct PipelineOptions {
  double kappa = 3.0;             // short-path budget: k <= kappa * ln n
  bool allow_nonstandard_input = false;
  int max_sampled_modes = 64;     // system plus environment modes fed to the sampler
};

struct PipelineSample {
  OccupationVector outcome;       // detected photons on the m system modes
  SampleOutcome raw;              // sampler output on the (possibly dilated) modes
  OccupationVector survivors;     // lossy-mode photons that passed the front losses
  OccupationVector emitted_input; // input produced by the strategy
  std::uint64_t permanent_evaluations = 0;
};

// Approximate sampler for a lossy network fed with single photons.
//
// Construction extracts the front losses and splits the occupied inputs into
// short-path modes (s_i < c ln n) and lossy modes. Each draw samples which
// lossy-mode photons survive their front losses, lets the strategy turn them
// into a binned input, and runs the chain-rule sampler on the residual network.
// Front losses of short-path modes stay inside the residual. When the residual
// is still lossy it is sampled through its dilation, and the raw probability
// refers to the joint system-plus-environment outcome.
class UnbalancedSimulator {
 public:
  UnbalancedSimulator(const LossyNetwork& net, const OccupationVector& s, ApproximationStrategy strategy, double c,
                      PipelineOptions options = {})
      : m_(net.modes()), input_(s), strategy_(std::move(strategy)), options_(options) {
    if (s.modes() != m_) throw DimensionError("input length differs from network modes");
    const int n = s.photons();
    if (n < 1) throw RangeError("pipeline needs at least one photon");
    if (!(c >= 0.0)) throw RangeError("c must be >= 0");
    if (!options_.allow_nonstandard_input) {
      for (int i = 0; i < m_; ++i)
        if (s[static_cast<std::size_t>(i)] != (i < n ? 1 : 0))
          throw HypothesisError("pipeline expects the standard input |1...1 0...0>");
    }
    cert_.n = n;
    cert_.c = c;
    cert_.strategy = strategy_.name;

    if (net.lossless()) {
      // Nothing is lost, so nothing is approximated.
      exact_ = true;
      sampled_unitary_ = compose_unitary(net).matrix();
      sampled_modes_ = m_;
      cert_.k = s.alpha();
      cert_.strategy = "exact";
      return;
    }

    const ExtractionResult ext = extract_losses(net);
    const double threshold = c * std::log(static_cast<double>(n));
    std::vector<double> kept_front(static_cast<std::size_t>(m_), 1.0);
    for (int i = 0; i < m_; ++i) {
      if (s[static_cast<std::size_t>(i)] == 0) continue;
      if (ext.exponents[static_cast<std::size_t>(i)] < threshold) {
        lossless_modes_.push_back(i + 1);
        lossless_occ_.push_back(s[static_cast<std::size_t>(i)]);
        kept_front[static_cast<std::size_t>(i)] = ext.front[static_cast<std::size_t>(i)];
      } else {
        lossy_modes_.push_back(i + 1);
        lossy_front_.push_back(ext.front[static_cast<std::size_t>(i)]);
      }
    }
    const int k = static_cast<int>(lossless_modes_.size());
    const double budget = options_.kappa * std::log(static_cast<double>(n));
    if (k > budget)
      throw HypothesisError(std::to_string(k) + " short-path inputs exceed the budget " + std::to_string(budget));

    const LossyNetwork residual = with_front_losses(ext.residual, LossVector(kept_front));
    if (residual.lossless()) {
      sampled_unitary_ = compose_unitary(residual).matrix();
      sampled_modes_ = m_;
    } else {
      const int total = m_ + count_loss_elements(residual);
      if (total > options_.max_sampled_modes)
        throw LimitError("residual dilation needs " + std::to_string(total) + " modes");
      DilatedNetwork d = dilate(residual);
      sampled_unitary_ = d.unitary.matrix();
      sampled_modes_ = total;
    }

    // The least lossy element sets the per-element eta of the certificate.
    double eta = 0.0;
    for (const auto& el : net.elements())
      for (double t : el.eta)
        if (t < 1.0) eta = std::max(eta, t);
    for (const auto& l : net.standalone_losses())
      if (l.eta < 1.0) eta = std::max(eta, l.eta);
    const TVBound b = tv_bound_network(n, k, eta, c);
    cert_.k = k;
    cert_.eta = eta;
    cert_.eta_eff = b.effective_eta;
    cert_.c_threshold = b.c_threshold;
    cert_.delta = b.value;
  }

  const Certificate& certificate() const { return cert_; }
  int sampled_modes() const { return sampled_modes_; }
  const std::vector<int>& lossless_modes() const { return lossless_modes_; }
  const std::vector<int>& lossy_modes() const { return lossy_modes_; }

  PipelineSample sample(Rng& rng) const {
    OpCounter counter;
    if (exact_) {
      SampleOutcome raw = lossyboson::sample(UnitaryMatrix(sampled_unitary_), input_, rng, &counter);
      OccupationVector out = raw.outcome;
      return {std::move(out), std::move(raw), OccupationVector::vacuum(m_), input_, counter.permanents};
    }

    StrategyRequest req;
    req.modes = m_;
    req.lossless_modes = lossless_modes_;
    req.lossless_occupations = lossless_occ_;
    req.lossy_modes = lossy_modes_;
    std::vector<int> surv(static_cast<std::size_t>(m_), 0);
    for (std::size_t i = 0; i < lossy_modes_.size(); ++i) {
      const int mode = lossy_modes_[i];
      for (int c = 0; c < input_[static_cast<std::size_t>(mode - 1)]; ++c)
        if (rng.bernoulli(lossy_front_[i])) {
          ++surv[static_cast<std::size_t>(mode - 1)];
          ++req.survivor_count;
        }
    }
    req.survivors = OccupationVector(std::move(surv));

    StrategyOutput emitted = strategy_.provider(req);
    validate(emitted, req);

    std::vector<int> padded(emitted.input.vector());
    padded.resize(static_cast<std::size_t>(sampled_modes_), 0);
    const OccupationVector big_input(std::move(padded));

    if (big_input.photons() == 0) {
      SampleOutcome raw{OccupationVector::vacuum(sampled_modes_), 1.0, ModeAssignment()};
      return {OccupationVector::vacuum(m_), std::move(raw), req.survivors, emitted.input, 0};
    }

    CMatrix total = sampled_unitary_;
    if (emitted.pre_unitary) {
      CMatrix pre = CMatrix::identity(sampled_modes_);
      for (int i = 0; i < m_; ++i)
        for (int j = 0; j < m_; ++j) pre(i, j) = (*emitted.pre_unitary)(i, j);
      total = total * pre;
    }
    SampleOutcome raw = lossyboson::sample(UnitaryMatrix(std::move(total)), big_input, rng, &counter);
    std::vector<int> sys(raw.outcome.vector().begin(), raw.outcome.vector().begin() + m_);
    return {OccupationVector(std::move(sys)), std::move(raw), req.survivors, emitted.input, counter.permanents};
  }

 private:
  void validate(const StrategyOutput& out, const StrategyRequest& req) const {
    if (out.input.modes() != m_) throw DimensionError("strategy emitted an input of the wrong length");
    for (std::size_t i = 0; i < req.lossless_modes.size(); ++i)
      if (out.input[static_cast<std::size_t>(req.lossless_modes[i] - 1)] != req.lossless_occupations[i])
        throw HypothesisError("strategy altered a lossless mode");
    if (out.pre_unitary) {
      const CMatrix& u = *out.pre_unitary;
      if (u.rows() != m_ || u.cols() != m_) throw DimensionError("pre-network unitary has the wrong dimension");
      if (unitarity_defect(u) >= UnitaryMatrix::kTolerance) throw RangeError("pre-network matrix is not unitary");
      for (int a : req.lossless_modes)
        for (int j = 0; j < m_; ++j) {
          const cplx want = (a - 1 == j) ? 1.0 : 0.0;
          if (std::abs(u(a - 1, j) - want) > UnitaryMatrix::kTolerance ||
              std::abs(u(j, a - 1) - want) > UnitaryMatrix::kTolerance)
            throw HypothesisError("pre-network unitary must act as the identity on lossless modes");
        }
    }
  }

  int m_;
  OccupationVector input_;
  ApproximationStrategy strategy_;
  PipelineOptions options_;
  bool exact_ = false;
  CMatrix sampled_unitary_;
  int sampled_modes_ = 0;
  std::vector<int> lossless_modes_;
  std::vector<int> lossless_occ_;
  std::vector<int> lossy_modes_;
  std::vector<double> lossy_front_;
  Certificate cert_;
};

struct PipelineResult {
  PipelineSample sample;
  Certificate certificate;
};

inline PipelineResult simulate_unbalanced(const LossyNetwork& net, const OccupationVector& s,
                                          const ApproximationStrategy& strategy, double c, Rng& rng,
                                          PipelineOptions options = {}) {
  UnbalancedSimulator sim(net, s, strategy, c, options);
  return {sim.sample(rng), sim.certificate()};
}

}  // namespace lossyboson
